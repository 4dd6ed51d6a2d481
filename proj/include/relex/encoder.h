#pragma once

#include <vector>

#include "relex/tensor.h"

namespace relex {

// Bank of window x depth filters stored one per row (row-major window rows),
// with one scalar bias each.
struct FilterBank {
  int window = 3;  // odd
  int depth = 0;   // embedded row width
  Matrix weights;  // n_filters x (window*depth)
  Matrix bias;     // n_filters x 1

  int size() const { return weights.rows; }
};

// Per-filter argmax column of each pooling segment, -1 for an empty segment.
// Laid out as [filter*3 + segment].
struct PoolIndices {
  std::vector<int> argmax;
};

// Same-length convolution: the sentence is zero-padded with (window-1)/2
// rows on each side so output column j stays aligned with token j.
// Throws if the filter depth disagrees with the matrix or the window is even.
Matrix convolve(const Matrix& sentence, const FilterBank& bank);

// Max over the three column segments delimited by the entity positions:
// [0, e1], [e1+1, e2], [e2+1, k-1] with e1 = min(head, tail). An empty
// trailing segment pools to 0. Output is [filter*3 + segment].
Vector piecewise_max_pool(const Matrix& conv_map, int head_pos, int tail_pos,
                          PoolIndices* indices = nullptr);

// Componentwise tanh of the pooled vector.
Vector sentence_feature(const Vector& pooled);

}  // namespace relex
