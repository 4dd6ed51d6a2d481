#include "relex/trainer.h"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "relex/errors.h"

namespace relex {

namespace {

// Backward from the sentence feature down to the parameter tables. g_feature
// is dL/d(feature); the pooling argmax makes the convolution gradient touch
// at most three columns per filter.
void sentence_backward(const SentenceState& st, const Vector& g_feature,
                       const ModelParams& params, Gradients& grads) {
  bool live = false;
  for (double v : g_feature)
    if (v != 0.0) {
      live = true;
      break;
    }
  if (!live) return;

  const int n_filters = params.filters.size();
  const int window = params.filters.window;
  const int depth = params.filters.depth;
  const int half = (window - 1) / 2;
  const int k = st.input.rows;

  Matrix g_input(k, depth);
  for (int f = 0; f < n_filters; ++f) {
    const double* w = params.filters.weights.row(f);
    double* gw = grads.filters.weights.row(f);
    for (int s = 0; s < 3; ++s) {
      const std::size_t slot = static_cast<std::size_t>(f) * 3 + s;
      const int col = st.pool.argmax[slot];
      if (col < 0) continue;  // empty segment contributed a constant 0
      const double th = st.feature[slot];
      const double g = g_feature[slot] * (1.0 - th * th);  // tanh'
      if (g == 0.0) continue;
      grads.filters.bias(f, 0) += g;
      for (int t = 0; t < window; ++t) {
        const int row = col - half + t;
        if (row < 0 || row >= k) continue;  // zero padding
        const double* x = st.input.row(row);
        double* gx = g_input.row(row);
        double* gwt = gw + static_cast<std::size_t>(t) * depth;
        const double* wt = w + static_cast<std::size_t>(t) * depth;
        for (int c = 0; c < depth; ++c) {
          gwt[c] += g * x[c];
          gx[c] += g * wt[c];
        }
      }
    }
  }

  // input row i is gamma_i * [word; head position; tail position]; the
  // weight itself carries no gradient
  const int d_w = params.word_embeddings.cols;
  const int d_p = params.positions.head.cols;
  for (int i = 0; i < k; ++i) {
    const double gamma = st.gamma[static_cast<std::size_t>(i)];
    if (gamma == 0.0) continue;
    const double* gx = g_input.row(i);
    double* g_word =
        grads.word_embeddings.row(st.sentence->token_ids[static_cast<std::size_t>(i)]);
    for (int c = 0; c < d_w; ++c) g_word[c] += gamma * gx[c];
    const auto [row_h, row_t] = st.position_rows[static_cast<std::size_t>(i)];
    double* g_head = grads.positions.head.row(row_h);
    for (int c = 0; c < d_p; ++c) g_head[c] += gamma * gx[d_w + c];
    double* g_tail = grads.positions.tail.row(row_t);
    for (int c = 0; c < d_p; ++c) g_tail[c] += gamma * gx[d_w + d_p + c];
  }
}

}  // namespace

BatchStats compute_gradients(const std::vector<const Bag*>& batch, const ModelParams& params,
                             const ForwardConfig& config, double dropout_rate, bool training,
                             Rng& rng) {
  BatchStats stats;
  stats.grads = zeros_like(params);
  if (batch.empty()) return stats;
  const double inv_n = 1.0 / static_cast<double>(batch.size());
  const int feature_len = params.output.weights.cols;
  const int n_rel = params.output.relations();

  for (const Bag* bag_ptr : batch) {
    const Bag& bag = *bag_ptr;
    const int gold = bag.label_ids.empty() ? 0 : bag.label_ids.front();
    BagState state = encode_bag(bag, gold, params, config);
    const Vector mask = dropout_mask(feature_len, dropout_rate, training, rng);
    const Vector dropped = hadamard(state.bag, mask);
    const Vector o = logits(dropped, params.output);
    const double bag_loss = -log_softmax_at(o, gold);
    if (!std::isfinite(bag_loss))
      throw std::runtime_error("non-finite loss for bag (" + bag.head_entity + ", " +
                               bag.tail_entity + ")");
    stats.loss += bag_loss * inv_n;

    // softmax cross-entropy: dL/do = (p - onehot) / batch
    const Vector p = softmax(o);
    Vector go(static_cast<std::size_t>(n_rel));
    for (int r = 0; r < n_rel; ++r)
      go[static_cast<std::size_t>(r)] = (p[static_cast<std::size_t>(r)] - (r == gold)) * inv_n;

    Vector g_dropped(static_cast<std::size_t>(feature_len), 0.0);
    for (int r = 0; r < n_rel; ++r) {
      const double g = go[static_cast<std::size_t>(r)];
      stats.grads.output.bias(r, 0) += g;
      const double* w = params.output.weights.row(r);
      double* gw = stats.grads.output.weights.row(r);
      for (int c = 0; c < feature_len; ++c) {
        gw[c] += g * dropped[static_cast<std::size_t>(c)];
        g_dropped[static_cast<std::size_t>(c)] += g * w[c];
      }
    }
    const Vector gB = hadamard(g_dropped, mask);

    const std::size_t n = state.sentences.size();
    std::vector<Vector> g_feature(n, Vector(static_cast<std::size_t>(feature_len), 0.0));
    for (std::size_t j = 0; j < n; ++j)
      if (state.alpha[j] != 0.0) axpy(state.alpha[j], gB, g_feature[j]);

    // relevance-weighting path; the hard selection of the anchor sentence
    // and the uniform fallback contribute no gradient
    if (config.strategy == AggregationStrategy::NonIid && !state.uniform_fallback && n > 1) {
      std::vector<double> g_alpha(n);
      for (std::size_t j = 0; j < n; ++j) g_alpha[j] = dot(gB, state.sentences[j].feature);
      double mix = 0.0;
      for (std::size_t j = 0; j < n; ++j) mix += g_alpha[j] * state.alpha[j];

      const std::size_t anchor = static_cast<std::size_t>(state.best_index);
      const Vector& si = state.sentences[anchor].feature;
      const double ni = norm(si);
      for (std::size_t l = 0; l < n; ++l) {
        if (l == anchor) continue;  // self-relevance is the constant 1
        const double e = state.relevance_scores[l];
        if (config.relevance_mode == RelevanceMode::Clamped && e <= 0.0)
          continue;  // clamp subgradient
        const double ge = (g_alpha[l] - mix) / state.denom;
        if (ge == 0.0) continue;
        const Vector& sl = state.sentences[l].feature;
        const double nl = norm(sl);
        if (ni < 1e-12 || nl < 1e-12) continue;  // guarded relevance is flat
        const double inv_prod = 1.0 / (ni * nl);
        const double inv_ll = e / (nl * nl);
        const double inv_ii = e / (ni * ni);
        for (int c = 0; c < feature_len; ++c) {
          const std::size_t ci = static_cast<std::size_t>(c);
          g_feature[l][ci] += ge * (si[ci] * inv_prod - sl[ci] * inv_ll);
          g_feature[anchor][ci] += ge * (sl[ci] * inv_prod - si[ci] * inv_ii);
        }
      }
    }

    for (std::size_t j = 0; j < n; ++j)
      sentence_backward(state.sentences[j], g_feature[j], params, stats.grads);
  }
  return stats;
}

double batch_loss(const std::vector<const Bag*>& batch, const ModelParams& params,
                  const ForwardConfig& config) {
  if (batch.empty()) return 0.0;
  double total = 0.0;
  for (const Bag* bag_ptr : batch) {
    const int gold = bag_ptr->label_ids.empty() ? 0 : bag_ptr->label_ids.front();
    BagState state = encode_bag(*bag_ptr, gold, params, config);
    total += -log_softmax_at(logits(state.bag, params.output), gold);
  }
  return total / static_cast<double>(batch.size());
}

void sgd_step(ModelParams& params, const Gradients& grads, double learning_rate,
              bool freeze_word_embeddings) {
  auto update = [learning_rate](Matrix& m, const Matrix& g) {
    for (std::size_t i = 0; i < m.data.size(); ++i) m.data[i] -= learning_rate * g.data[i];
  };
  if (!freeze_word_embeddings) update(params.word_embeddings, grads.word_embeddings);
  update(params.positions.head, grads.positions.head);
  update(params.positions.tail, grads.positions.tail);
  update(params.filters.weights, grads.filters.weights);
  update(params.filters.bias, grads.filters.bias);
  update(params.output.weights, grads.output.weights);
  update(params.output.bias, grads.output.bias);
}

TrainResult train(const Dataset& dataset, const Hyperparams& h, const ForwardConfig& config,
                  const TrainOptions& options) {
  validate_hyperparams(h);
  if (dataset.bags.empty()) throw ConfigError("training corpus has no bags");

  Rng rng(h.seed);
  std::optional<Matrix> word_init;
  if (!options.embeddings_path.empty())
    word_init = load_embeddings_text(options.embeddings_path, dataset.vocabulary, h.word_dim, rng);

  TrainResult result;
  result.params =
      init_params(h, dataset.vocabulary.size(), dataset.relations.size(), word_init, rng);

  std::vector<std::size_t> order(dataset.bags.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (int epoch = 0; epoch < h.epochs; ++epoch) {
    rng.shuffle(order);
    double epoch_total = 0.0;
    for (std::size_t start = 0; start < order.size(); start += static_cast<std::size_t>(h.batch_size)) {
      const std::size_t stop = std::min(order.size(), start + static_cast<std::size_t>(h.batch_size));
      std::vector<const Bag*> batch;
      batch.reserve(stop - start);
      for (std::size_t i = start; i < stop; ++i) batch.push_back(&dataset.bags[order[i]]);
      BatchStats stats = compute_gradients(batch, result.params, config, h.dropout, true, rng);
      sgd_step(result.params, stats.grads, h.learning_rate, options.freeze_word_embeddings);
      epoch_total += stats.loss * static_cast<double>(batch.size());
    }
    result.epoch_loss.push_back(epoch_total / static_cast<double>(order.size()));
  }
  return result;
}

}  // namespace relex
