#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "relex/attenuation.h"
#include "relex/bag_attention.h"
#include "relex/classifier.h"
#include "relex/corpus.h"
#include "relex/embedding.h"
#include "relex/encoder.h"
#include "relex/rng.h"
#include "relex/tensor.h"

namespace relex {

struct Hyperparams {
  int window = 3;
  int feature_maps = 230;
  int word_dim = 50;
  int pos_dim = 5;
  int batch_size = 160;
  double learning_rate = 0.01;
  double dropout = 0.5;
  int threshold = 60;  // attenuation distance cutoff
  int epochs = 14;
  std::uint64_t seed = 1;
  int max_len = 100;
  int max_distance = 0;  // position table clip range; 0 means max_len

  int effective_max_distance() const { return max_distance > 0 ? max_distance : max_len; }
  int depth() const { return word_dim + 2 * pos_dim; }
  int feature_len() const { return 3 * feature_maps; }
};

// Throws ConfigError on out-of-range values (even window, zero dims, ...).
void validate_hyperparams(const Hyperparams& h);

struct ForwardConfig {
  AggregationStrategy strategy = AggregationStrategy::NonIid;
  RelevanceMode relevance_mode = RelevanceMode::Clamped;
  AttenuationConfig attenuation;
};

// Every learnable tensor of the model.
struct ModelParams {
  Matrix word_embeddings;  // V x word_dim
  PositionEmbeddingTable positions;
  FilterBank filters;
  OutputLayer output;
};

using Gradients = ModelParams;

Gradients zeros_like(const ModelParams& params);
long long parameter_count(const ModelParams& params);

template <typename F>
void for_each_tensor(ModelParams& p, F&& f) {
  f("word_embeddings", p.word_embeddings);
  f("position_head", p.positions.head);
  f("position_tail", p.positions.tail);
  f("filters", p.filters.weights);
  f("filter_bias", p.filters.bias);
  f("output_weights", p.output.weights);
  f("output_bias", p.output.bias);
}

template <typename F>
void for_each_tensor(const ModelParams& p, F&& f) {
  f("word_embeddings", p.word_embeddings);
  f("position_head", p.positions.head);
  f("position_tail", p.positions.tail);
  f("filters", p.filters.weights);
  f("filter_bias", p.filters.bias);
  f("output_weights", p.output.weights);
  f("output_bias", p.output.bias);
}

// Biases start at zero; position tables are uniform [-1, 1]; filters and the
// output matrix use the uniform fan bound sqrt(6/(fan_in+fan_out)). The word
// table comes from `word_init` when given, otherwise uniform [-0.25, 0.25].
// Fully determined by the generator state.
ModelParams init_params(const Hyperparams& h, int vocab_size, int n_relations,
                        const std::optional<Matrix>& word_init, Rng& rng);

// Cached per-sentence forward state, kept for the backward pass.
struct SentenceState {
  const SentenceInstance* sentence = nullptr;
  std::vector<double> gamma;
  std::vector<std::pair<int, int>> position_rows;  // clipped table rows per token
  Matrix input;                                    // k x depth after attenuation
  PoolIndices pool;
  Vector feature;  // tanh of pooled, length 3*n_filters
};

SentenceState encode_sentence(const SentenceInstance& sentence, const ModelParams& params,
                              const AttenuationConfig& attenuation);

struct BagState {
  std::vector<SentenceState> sentences;
  int best_index = -1;
  std::vector<double> relevance_scores;  // NonIid only; entry for the best sentence is 1
  std::vector<double> alpha;
  double denom = 0.0;
  bool uniform_fallback = false;
  Vector bag;
};

BagState encode_bag(const Bag& bag, int relation, const ModelParams& params,
                    const ForwardConfig& config);

BagDiagnostics bag_diagnostics(const BagState& state);

}  // namespace relex
