#pragma once

#include <string>
#include <vector>

#include "relex/classifier.h"
#include "relex/tensor.h"

namespace relex {

enum class AggregationStrategy { One, Avg, NonIid };
enum class RelevanceMode { Clamped, Literal };

AggregationStrategy parse_strategy(const std::string& name);
std::string strategy_name(AggregationStrategy strategy);
RelevanceMode parse_relevance_mode(const std::string& name);
std::string relevance_mode_name(RelevanceMode mode);

// Index of the sentence with the highest p(relation | sentence) under the
// output layer applied to each feature alone. Ties break to the lowest index.
int select_best(const std::vector<Vector>& features, int relation, const OutputLayer& layer);

// Cosine similarity; 0 when either norm is below 1e-12.
double relevance(const Vector& a, const Vector& b);

struct AttentionDetail {
  std::vector<double> alpha;
  double denom = 0.0;
  bool uniform_fallback = false;
};

// Normalizes relevance scores into sentence weights. Clamped mode floors
// scores at 0 before normalizing, guaranteeing a convex combination;
// literal mode divides the raw scores by their sum. Denominators smaller
// than 1e-9 in magnitude fall back to uniform weights.
AttentionDetail attention_weights_detail(const std::vector<double>& scores, RelevanceMode mode);
std::vector<double> attention_weights(const std::vector<double>& scores, RelevanceMode mode);

// Weighted sum of sentence features.
Vector bag_vector(const std::vector<Vector>& features, const std::vector<double>& alpha);

struct BagDiagnostics {
  int best_index = -1;
  std::vector<double> relevance;  // empty unless the strategy computes it
  std::vector<double> weights;
};

// Combines sentence features into one bag vector:
//   One    - the best sentence alone
//   Avg    - uniform mean
//   NonIid - relevance-weighted sum anchored at the best sentence
Vector aggregate(const std::vector<Vector>& features, AggregationStrategy strategy,
                 RelevanceMode relevance_mode, int relation, const OutputLayer& layer,
                 BagDiagnostics* diagnostics = nullptr);

}  // namespace relex
