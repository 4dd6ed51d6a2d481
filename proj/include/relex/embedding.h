#pragma once

#include <string>
#include <utility>
#include <vector>

#include "relex/corpus.h"
#include "relex/rng.h"
#include "relex/tensor.h"

namespace relex {

struct EmbeddingConfig {
  int word_dim = 50;
  int pos_dim = 5;
  int max_distance = 100;  // distances clip to [-max_distance, max_distance]
};

// Two tables of (2*max_distance + 1) x pos_dim rows; row = clipped
// distance + max_distance.
struct PositionEmbeddingTable {
  Matrix head;
  Matrix tail;

  int max_distance() const { return (head.rows - 1) / 2; }
};

// Signed distances (i - head_pos, i - tail_pos) for each token index i.
std::vector<std::pair<int, int>> relative_distances(const SentenceInstance& sentence);

// Saturating row index: min(max(d, -max_distance), max_distance) + max_distance.
int clip_distance(int d, int max_distance);

// k x (word_dim + 2*pos_dim) matrix; row i concatenates the word vector with
// the head- and tail-relative position vectors. Throws if a token id is out
// of range for the word table.
Matrix embed_sentence(const SentenceInstance& sentence, const Matrix& word_table,
                      const PositionEmbeddingTable& positions);

// Text format: first line "V word_dim", then one "word v_1 ... v_dim" line
// per word. Vocabulary entries without a file vector get uniform random
// values in [-0.25, 0.25], drawn from the run generator in vocabulary index
// order. An empty file yields a fully random table.
Matrix load_embeddings_text(const std::string& path, const Vocabulary& vocabulary, int word_dim,
                            Rng& rng);

}  // namespace relex
