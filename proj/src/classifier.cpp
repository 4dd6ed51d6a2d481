#include "relex/classifier.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace relex {

Vector dropout_mask(int length, double rate, bool training, Rng& rng) {
  Vector mask(static_cast<std::size_t>(length), 1.0);
  if (!training || rate <= 0.0) return mask;
  if (rate >= 1.0) throw std::runtime_error("dropout rate must be below 1");
  const double keep = 1.0 / (1.0 - rate);
  for (auto& m : mask) m = rng.bernoulli(rate) ? 0.0 : keep;
  return mask;
}

Vector logits(const Vector& input, const OutputLayer& layer) {
  if (static_cast<int>(input.size()) != layer.weights.cols)
    throw std::runtime_error("input length does not match output layer width");
  Vector o(static_cast<std::size_t>(layer.relations()));
  for (int r = 0; r < layer.relations(); ++r) {
    const double* w = layer.weights.row(r);
    double acc = layer.bias(r, 0);
    for (std::size_t c = 0; c < input.size(); ++c) acc += w[c] * input[c];
    o[static_cast<std::size_t>(r)] = acc;
  }
  return o;
}

Vector softmax(const Vector& o) {
  const double m = *std::max_element(o.begin(), o.end());
  Vector p(o.size());
  double z = 0.0;
  for (std::size_t i = 0; i < o.size(); ++i) {
    p[i] = std::exp(o[i] - m);
    z += p[i];
  }
  for (auto& v : p) v /= z;
  return p;
}

double log_softmax_at(const Vector& o, int index) {
  const double m = *std::max_element(o.begin(), o.end());
  double z = 0.0;
  for (double v : o) z += std::exp(v - m);
  return o[static_cast<std::size_t>(index)] - m - std::log(z);
}

Objective objective(const std::vector<std::pair<Vector, int>>& batch, const OutputLayer& layer) {
  Objective obj;
  if (batch.empty()) return obj;
  for (const auto& [vec, gold] : batch) obj.log_likelihood += log_softmax_at(logits(vec, layer), gold);
  obj.loss = -obj.log_likelihood / static_cast<double>(batch.size());
  return obj;
}

}  // namespace relex
