#pragma once

#include <utility>
#include <vector>

#include "relex/rng.h"
#include "relex/tensor.h"

namespace relex {

// Final linear layer: weights are n_relations x feature_len plus one bias
// per relation.
struct OutputLayer {
  Matrix weights;
  Matrix bias;  // n_relations x 1

  int relations() const { return weights.rows; }
};

// Inverted dropout: during training each component is 0 with probability
// `rate`, otherwise 1/(1-rate); at inference the mask is all ones and the
// generator is not consumed.
Vector dropout_mask(int length, double rate, bool training, Rng& rng);

// o = W * input + bias
Vector logits(const Vector& input, const OutputLayer& layer);

// Max-shifted softmax; a probability distribution for any finite input.
Vector softmax(const Vector& o);

// log softmax(o)[index] via log-sum-exp, never log of a literal zero.
double log_softmax_at(const Vector& o, int index);

struct Objective {
  double log_likelihood = 0.0;  // sum of log p(gold)
  double loss = 0.0;            // -log_likelihood / batch size
};

// Cross-entropy over a batch of (bag vector, gold relation) pairs.
Objective objective(const std::vector<std::pair<Vector, int>>& batch, const OutputLayer& layer);

}  // namespace relex
