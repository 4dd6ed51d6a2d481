#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "relex/model.h"

namespace relex {

// Central difference of f at one coordinate; restores the value afterwards.
double central_difference(const std::function<double()>& f, double& coordinate, double h);

// |analytic - numeric| relative to the numeric value, floored so that
// finite-difference noise on near-zero gradients does not register.
double gradient_relative_error(double analytic, double numeric);

struct TensorCheck {
  std::string name;
  int checked = 0;
  double worst_error = 0.0;
  int worst_coordinate = -1;
  double worst_analytic = 0.0;
  double worst_numeric = 0.0;
  bool pass = true;
};

struct GradCheckReport {
  std::vector<TensorCheck> tensors;
  double worst_error = 0.0;
  bool pass = true;
};

struct GradCheckOptions {
  double h = 1e-5;
  double tolerance = 1e-4;
  int samples_per_tensor = 50;  // tensors at or below this size are checked fully
  std::uint64_t sample_seed = 20240901;
  double corrupt_scale = 1.0;  // debug hook: scales analytic gradients
};

// Compares analytic minibatch gradients against central finite differences
// on seeded coordinate samples of every tensor. Dropout is disabled.
GradCheckReport gradient_check(const std::vector<const Bag*>& batch, ModelParams& params,
                               const ForwardConfig& config, const GradCheckOptions& options = {});

}  // namespace relex
