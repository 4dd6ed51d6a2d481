#include "relex/gradcheck.h"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "relex/rng.h"
#include "relex/trainer.h"

namespace relex {

double central_difference(const std::function<double()>& f, double& coordinate, double h) {
  const double saved = coordinate;
  coordinate = saved + h;
  const double plus = f();
  coordinate = saved - h;
  const double minus = f();
  coordinate = saved;
  return (plus - minus) / (2.0 * h);
}

double gradient_relative_error(double analytic, double numeric) {
  // so a gradient corrupted by a factor of 2 reads as an error near 1
  return std::abs(analytic - numeric) / std::max(std::abs(numeric), 1e-4);
}

GradCheckReport gradient_check(const std::vector<const Bag*>& batch, ModelParams& params,
                               const ForwardConfig& config, const GradCheckOptions& options) {
  Rng unused(0);
  BatchStats stats = compute_gradients(batch, params, config, 0.0, false, unused);
  if (options.corrupt_scale != 1.0)
    for_each_tensor(stats.grads, [&](const char*, Matrix& m) {
      for (auto& v : m.data) v *= options.corrupt_scale;
    });

  std::vector<std::pair<const char*, Matrix*>> param_tensors;
  for_each_tensor(params, [&](const char* name, Matrix& m) { param_tensors.emplace_back(name, &m); });
  std::vector<Matrix*> grad_tensors;
  for_each_tensor(stats.grads, [&](const char*, Matrix& m) { grad_tensors.push_back(&m); });

  Rng sampler(options.sample_seed);
  GradCheckReport report;
  for (std::size_t t = 0; t < param_tensors.size(); ++t) {
    Matrix& tensor = *param_tensors[t].second;
    const Matrix& grad = *grad_tensors[t];
    TensorCheck check;
    check.name = param_tensors[t].first;

    std::vector<int> coords;
    const int size = tensor.size();
    if (size <= options.samples_per_tensor) {
      coords.resize(static_cast<std::size_t>(size));
      for (int i = 0; i < size; ++i) coords[static_cast<std::size_t>(i)] = i;
    } else {
      std::unordered_set<int> seen;
      while (static_cast<int>(coords.size()) < options.samples_per_tensor) {
        int idx = static_cast<int>(sampler.below(static_cast<std::uint64_t>(size)));
        if (seen.insert(idx).second) coords.push_back(idx);
      }
    }

    for (int idx : coords) {
      double& coordinate = tensor.data[static_cast<std::size_t>(idx)];
      const double numeric = central_difference(
          [&] { return batch_loss(batch, params, config); }, coordinate, options.h);
      const double analytic = grad.data[static_cast<std::size_t>(idx)];
      const double error = gradient_relative_error(analytic, numeric);
      ++check.checked;
      if (error > check.worst_error) {
        check.worst_error = error;
        check.worst_coordinate = idx;
        check.worst_analytic = analytic;
        check.worst_numeric = numeric;
      }
    }
    check.pass = check.worst_error <= options.tolerance;
    report.worst_error = std::max(report.worst_error, check.worst_error);
    report.pass = report.pass && check.pass;
    report.tensors.push_back(std::move(check));
  }
  return report;
}

}  // namespace relex
