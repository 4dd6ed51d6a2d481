#include "relex/bag_attention.h"

#include <cmath>
#include <stdexcept>

#include "relex/errors.h"

namespace relex {

AggregationStrategy parse_strategy(const std::string& name) {
  if (name == "one") return AggregationStrategy::One;
  if (name == "avg") return AggregationStrategy::Avg;
  if (name == "noniid") return AggregationStrategy::NonIid;
  throw ConfigError("unknown aggregation strategy: " + name);
}

std::string strategy_name(AggregationStrategy strategy) {
  switch (strategy) {
    case AggregationStrategy::One: return "one";
    case AggregationStrategy::Avg: return "avg";
    default: return "noniid";
  }
}

RelevanceMode parse_relevance_mode(const std::string& name) {
  if (name == "clamped") return RelevanceMode::Clamped;
  if (name == "literal") return RelevanceMode::Literal;
  throw ConfigError("unknown relevance mode: " + name);
}

std::string relevance_mode_name(RelevanceMode mode) {
  return mode == RelevanceMode::Clamped ? "clamped" : "literal";
}

int select_best(const std::vector<Vector>& features, int relation, const OutputLayer& layer) {
  if (features.empty()) throw std::runtime_error("cannot select from an empty bag");
  int best = 0;
  double best_score = log_softmax_at(logits(features[0], layer), relation);
  for (std::size_t j = 1; j < features.size(); ++j) {
    double score = log_softmax_at(logits(features[j], layer), relation);
    if (score > best_score) {  // strict: ties keep the lowest index
      best_score = score;
      best = static_cast<int>(j);
    }
  }
  return best;
}

double relevance(const Vector& a, const Vector& b) {
  const double na = norm(a);
  const double nb = norm(b);
  if (na < 1e-12 || nb < 1e-12) return 0.0;
  return dot(a, b) / (na * nb);
}

AttentionDetail attention_weights_detail(const std::vector<double>& scores, RelevanceMode mode) {
  AttentionDetail detail;
  const std::size_t n = scores.size();
  detail.alpha.assign(n, 0.0);
  std::vector<double> adjusted(n);
  for (std::size_t j = 0; j < n; ++j)
    adjusted[j] = mode == RelevanceMode::Clamped ? std::max(scores[j], 0.0) : scores[j];
  for (double v : adjusted) detail.denom += v;
  if (std::abs(detail.denom) < 1e-9) {
    detail.uniform_fallback = true;
    for (auto& a : detail.alpha) a = 1.0 / static_cast<double>(n);
    return detail;
  }
  for (std::size_t j = 0; j < n; ++j) detail.alpha[j] = adjusted[j] / detail.denom;
  return detail;
}

std::vector<double> attention_weights(const std::vector<double>& scores, RelevanceMode mode) {
  return attention_weights_detail(scores, mode).alpha;
}

Vector bag_vector(const std::vector<Vector>& features, const std::vector<double>& alpha) {
  if (features.size() != alpha.size())
    throw std::runtime_error("feature and weight counts differ");
  Vector out(features.front().size(), 0.0);
  for (std::size_t j = 0; j < features.size(); ++j) axpy(alpha[j], features[j], out);
  return out;
}

Vector aggregate(const std::vector<Vector>& features, AggregationStrategy strategy,
                 RelevanceMode relevance_mode, int relation, const OutputLayer& layer,
                 BagDiagnostics* diagnostics) {
  if (features.empty()) throw std::runtime_error("cannot aggregate an empty bag");
  const std::size_t n = features.size();

  if (strategy == AggregationStrategy::Avg) {
    std::vector<double> alpha(n, 1.0 / static_cast<double>(n));
    if (diagnostics) {
      diagnostics->best_index = -1;
      diagnostics->relevance.clear();
      diagnostics->weights = alpha;
    }
    return bag_vector(features, alpha);
  }

  const int best = select_best(features, relation, layer);
  if (strategy == AggregationStrategy::One) {
    std::vector<double> alpha(n, 0.0);
    alpha[static_cast<std::size_t>(best)] = 1.0;
    if (diagnostics) {
      diagnostics->best_index = best;
      diagnostics->relevance.clear();
      diagnostics->weights = alpha;
    }
    return features[static_cast<std::size_t>(best)];
  }

  std::vector<double> scores(n);
  for (std::size_t j = 0; j < n; ++j)
    scores[j] = j == static_cast<std::size_t>(best)
                    ? 1.0  // a sentence is fully relevant to itself
                    : relevance(features[static_cast<std::size_t>(best)], features[j]);
  auto detail = attention_weights_detail(scores, relevance_mode);
  if (diagnostics) {
    diagnostics->best_index = best;
    diagnostics->relevance = scores;
    diagnostics->weights = detail.alpha;
  }
  return bag_vector(features, detail.alpha);
}

}  // namespace relex
