#pragma once

#include <string>
#include <vector>

#include "relex/corpus.h"
#include "relex/tensor.h"

namespace relex {

enum class AttenuationMode { ConstantOne, Linear };

AttenuationMode parse_attenuation_mode(const std::string& name);
std::string attenuation_mode_name(AttenuationMode mode);

struct AttenuationConfig {
  AttenuationMode mode = AttenuationMode::Linear;
  int threshold = 60;  // distance cutoff, >= 1
};

// Weight of one word given its signed distances to head and tail entity.
// Within the threshold the weight is (1 - |d1|/T) + (1 - |d2|/T); a word
// whose distance to either entity exceeds the threshold gets weight 0.
double word_weight(int d1, int d2, int threshold);

// Per-token weights for a sentence; all ones in constant mode.
std::vector<double> attenuation_weights(const SentenceInstance& sentence,
                                        const AttenuationConfig& config);

// Scales row i of the embedded sentence by weights[i]. Throws on length
// mismatch.
Matrix apply_attenuation(const Matrix& raw, const std::vector<double>& weights);

}  // namespace relex
