#include "relex/attenuation.h"

#include <cmath>
#include <cstdlib>
#include <stdexcept>

#include "relex/errors.h"

namespace relex {

AttenuationMode parse_attenuation_mode(const std::string& name) {
  if (name == "constant") return AttenuationMode::ConstantOne;
  if (name == "linear") return AttenuationMode::Linear;
  throw ConfigError("unknown attenuation mode: " + name);
}

std::string attenuation_mode_name(AttenuationMode mode) {
  return mode == AttenuationMode::Linear ? "linear" : "constant";
}

double word_weight(int d1, int d2, int threshold) {
  const int a1 = std::abs(d1);
  const int a2 = std::abs(d2);
  if (a1 > threshold || a2 > threshold) return 0.0;
  const double t = static_cast<double>(threshold);
  return (1.0 - a1 / t) + (1.0 - a2 / t);
}

std::vector<double> attenuation_weights(const SentenceInstance& sentence,
                                        const AttenuationConfig& config) {
  std::vector<double> weights(static_cast<std::size_t>(sentence.length()), 1.0);
  if (config.mode == AttenuationMode::ConstantOne) return weights;
  if (config.threshold < 1) throw ConfigError("attenuation threshold must be >= 1");
  for (int i = 0; i < sentence.length(); ++i)
    weights[static_cast<std::size_t>(i)] =
        word_weight(i - sentence.head_pos, i - sentence.tail_pos, config.threshold);
  return weights;
}

Matrix apply_attenuation(const Matrix& raw, const std::vector<double>& weights) {
  if (static_cast<std::size_t>(raw.rows) != weights.size())
    throw std::runtime_error("attenuation weight count does not match sentence length");
  Matrix out = raw;
  for (int i = 0; i < out.rows; ++i) {
    double* r = out.row(i);
    for (int c = 0; c < out.cols; ++c) r[c] *= weights[static_cast<std::size_t>(i)];
  }
  return out;
}

}  // namespace relex
