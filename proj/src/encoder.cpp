#include "relex/encoder.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace relex {

Matrix convolve(const Matrix& sentence, const FilterBank& bank) {
  if (bank.depth != sentence.cols)
    throw std::runtime_error("filter depth does not match sentence width");
  if (bank.window % 2 == 0) throw std::runtime_error("filter window must be odd");

  const int k = sentence.rows;
  const int half = (bank.window - 1) / 2;
  Matrix out(bank.size(), k);
  for (int f = 0; f < bank.size(); ++f) {
    const double* w = bank.weights.row(f);
    for (int j = 0; j < k; ++j) {
      double acc = 0.0;
      // window rows in order; out-of-range rows contribute the zero pad
      for (int t = 0; t < bank.window; ++t) {
        int row = j - half + t;
        if (row < 0 || row >= k) continue;
        const double* x = sentence.row(row);
        const double* wt = w + static_cast<std::size_t>(t) * sentence.cols;
        for (int c = 0; c < sentence.cols; ++c) acc += wt[c] * x[c];
      }
      out(f, j) = acc + bank.bias(f, 0);
    }
  }
  return out;
}

Vector piecewise_max_pool(const Matrix& conv_map, int head_pos, int tail_pos,
                          PoolIndices* indices) {
  const int k = conv_map.cols;
  const int e1 = std::min(head_pos, tail_pos);
  const int e2 = std::max(head_pos, tail_pos);
  // segment column ranges [lo, hi); the third is empty when e2 is last
  const int lo[3] = {0, e1 + 1, e2 + 1};
  const int hi[3] = {e1 + 1, e2 + 1, k};

  Vector pooled(static_cast<std::size_t>(conv_map.rows) * 3, 0.0);
  if (indices) indices->argmax.assign(pooled.size(), -1);
  for (int f = 0; f < conv_map.rows; ++f) {
    const double* row = conv_map.row(f);
    for (int s = 0; s < 3; ++s) {
      if (lo[s] >= hi[s]) continue;  // empty segment pools to 0
      int best = lo[s];
      for (int j = lo[s] + 1; j < hi[s]; ++j)
        if (row[j] > row[best]) best = j;
      pooled[static_cast<std::size_t>(f) * 3 + s] = row[best];
      if (indices) indices->argmax[static_cast<std::size_t>(f) * 3 + s] = best;
    }
  }
  return pooled;
}

Vector sentence_feature(const Vector& pooled) {
  Vector out(pooled.size());
  for (std::size_t i = 0; i < pooled.size(); ++i) out[i] = std::tanh(pooled[i]);
  return out;
}

}  // namespace relex
