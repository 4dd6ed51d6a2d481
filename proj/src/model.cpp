#include "relex/model.h"

#include <cmath>

#include "relex/errors.h"

namespace relex {

void validate_hyperparams(const Hyperparams& h) {
  if (h.window < 1 || h.window % 2 == 0) throw ConfigError("window must be a positive odd number");
  if (h.feature_maps < 1) throw ConfigError("feature_maps must be positive");
  if (h.word_dim < 1) throw ConfigError("word_dim must be positive");
  if (h.pos_dim < 1) throw ConfigError("pos_dim must be positive");
  if (h.batch_size < 1) throw ConfigError("batch_size must be positive");
  if (!(h.learning_rate > 0.0)) throw ConfigError("learning_rate must be positive");
  if (h.dropout < 0.0 || h.dropout >= 1.0) throw ConfigError("dropout must be in [0, 1)");
  if (h.threshold < 1) throw ConfigError("threshold must be positive");
  if (h.epochs < 1) throw ConfigError("epochs must be positive");
  if (h.max_len < 2) throw ConfigError("max_len must be at least 2");
  if (h.max_distance < 0) throw ConfigError("max_distance must be non-negative");
}

Gradients zeros_like(const ModelParams& params) {
  Gradients g = params;
  for_each_tensor(g, [](const char*, Matrix& m) { m.zero(); });
  return g;
}

long long parameter_count(const ModelParams& params) {
  long long n = 0;
  for_each_tensor(params, [&](const char*, const Matrix& m) { n += m.size(); });
  return n;
}

static void fill_uniform(Matrix& m, double lo, double hi, Rng& rng) {
  for (auto& v : m.data) v = rng.uniform(lo, hi);
}

ModelParams init_params(const Hyperparams& h, int vocab_size, int n_relations,
                        const std::optional<Matrix>& word_init, Rng& rng) {
  validate_hyperparams(h);
  if (vocab_size < 1) throw ConfigError("vocabulary is empty");
  if (n_relations < 2) throw ConfigError("need NA plus at least one relation");

  ModelParams p;
  if (word_init) {
    if (word_init->rows != vocab_size || word_init->cols != h.word_dim)
      throw ConfigError("word initializer shape does not match vocabulary/word_dim");
    p.word_embeddings = *word_init;
  } else {
    p.word_embeddings = Matrix(vocab_size, h.word_dim);
    fill_uniform(p.word_embeddings, -0.25, 0.25, rng);
  }

  const int pos_rows = 2 * h.effective_max_distance() + 1;
  p.positions.head = Matrix(pos_rows, h.pos_dim);
  p.positions.tail = Matrix(pos_rows, h.pos_dim);
  fill_uniform(p.positions.head, -1.0, 1.0, rng);
  fill_uniform(p.positions.tail, -1.0, 1.0, rng);

  p.filters.window = h.window;
  p.filters.depth = h.depth();
  p.filters.weights = Matrix(h.feature_maps, h.window * h.depth());
  p.filters.bias = Matrix(h.feature_maps, 1);
  const double filter_bound = std::sqrt(6.0 / (h.window * h.depth() + 1));
  fill_uniform(p.filters.weights, -filter_bound, filter_bound, rng);

  p.output.weights = Matrix(n_relations, h.feature_len());
  p.output.bias = Matrix(n_relations, 1);
  const double output_bound = std::sqrt(6.0 / (h.feature_len() + n_relations));
  fill_uniform(p.output.weights, -output_bound, output_bound, rng);

  return p;
}

SentenceState encode_sentence(const SentenceInstance& sentence, const ModelParams& params,
                              const AttenuationConfig& attenuation) {
  SentenceState st;
  st.sentence = &sentence;
  st.gamma = attenuation_weights(sentence, attenuation);
  const int max_dist = params.positions.max_distance();
  st.position_rows.reserve(static_cast<std::size_t>(sentence.length()));
  for (int i = 0; i < sentence.length(); ++i)
    st.position_rows.emplace_back(clip_distance(i - sentence.head_pos, max_dist),
                                  clip_distance(i - sentence.tail_pos, max_dist));
  st.input = apply_attenuation(embed_sentence(sentence, params.word_embeddings, params.positions),
                               st.gamma);
  Matrix conv = convolve(st.input, params.filters);
  st.feature = sentence_feature(
      piecewise_max_pool(conv, sentence.head_pos, sentence.tail_pos, &st.pool));
  return st;
}

BagState encode_bag(const Bag& bag, int relation, const ModelParams& params,
                    const ForwardConfig& config) {
  BagState state;
  state.sentences.reserve(bag.sentences.size());
  std::vector<Vector> features;
  features.reserve(bag.sentences.size());
  for (const auto& s : bag.sentences) {
    state.sentences.push_back(encode_sentence(s, params, config.attenuation));
    features.push_back(state.sentences.back().feature);
  }
  const std::size_t n = features.size();

  switch (config.strategy) {
    case AggregationStrategy::Avg:
      state.alpha.assign(n, 1.0 / static_cast<double>(n));
      break;
    case AggregationStrategy::One:
      state.best_index = select_best(features, relation, params.output);
      state.alpha.assign(n, 0.0);
      state.alpha[static_cast<std::size_t>(state.best_index)] = 1.0;
      break;
    case AggregationStrategy::NonIid: {
      state.best_index = select_best(features, relation, params.output);
      state.relevance_scores.assign(n, 1.0);
      for (std::size_t j = 0; j < n; ++j)
        if (j != static_cast<std::size_t>(state.best_index))
          state.relevance_scores[j] =
              relevance(features[static_cast<std::size_t>(state.best_index)], features[j]);
      auto detail = attention_weights_detail(state.relevance_scores, config.relevance_mode);
      state.alpha = detail.alpha;
      state.denom = detail.denom;
      state.uniform_fallback = detail.uniform_fallback;
      break;
    }
  }
  state.bag = bag_vector(features, state.alpha);
  return state;
}

BagDiagnostics bag_diagnostics(const BagState& state) {
  BagDiagnostics d;
  d.best_index = state.best_index;
  d.relevance = state.relevance_scores;
  d.weights = state.alpha;
  return d;
}

}  // namespace relex
