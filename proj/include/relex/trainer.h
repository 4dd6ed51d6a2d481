#pragma once

#include <string>
#include <vector>

#include "relex/model.h"

namespace relex {

struct BatchStats {
  double loss = 0.0;
  Gradients grads;
};

// Forward and backward over a minibatch of bags. The loss is the mean
// negative log-probability of each bag's gold relation; gradients cover
// every parameter tensor, including the relevance-weighting path and the
// attenuated embedding rows. The hard best-sentence selection itself does
// not propagate gradient. Throws if any bag produces a non-finite loss.
BatchStats compute_gradients(const std::vector<const Bag*>& batch, const ModelParams& params,
                             const ForwardConfig& config, double dropout_rate, bool training,
                             Rng& rng);

// Forward-only loss with dropout disabled; used by finite differencing.
double batch_loss(const std::vector<const Bag*>& batch, const ModelParams& params,
                  const ForwardConfig& config);

// p <- p - lr * grad for every tensor (word table skipped when frozen).
void sgd_step(ModelParams& params, const Gradients& grads, double learning_rate,
              bool freeze_word_embeddings = false);

struct TrainOptions {
  std::string embeddings_path;  // optional pretrained word vectors
  bool freeze_word_embeddings = false;
};

struct TrainResult {
  ModelParams params;
  std::vector<double> epoch_loss;  // mean per-bag loss after each epoch
};

// Minibatch SGD over bags: each epoch reshuffles bag order and takes one
// step per consecutive batch. Deterministic given (dataset, hyperparams,
// seed).
TrainResult train(const Dataset& dataset, const Hyperparams& h, const ForwardConfig& config,
                  const TrainOptions& options = {});

}  // namespace relex
