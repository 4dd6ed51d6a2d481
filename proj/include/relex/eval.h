#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "relex/model.h"
#include "relex/trainer.h"

namespace relex {

// A ranked (pair, relation) prediction; relation is never NA.
struct PredictedFact {
  std::string head_entity;
  std::string tail_entity;
  int relation_id = 0;
  double confidence = 0.0;
};

using FactKey = std::tuple<std::string, std::string, int>;
using GoldSet = std::set<FactKey>;

struct CaseDiagnostics {
  std::string head_entity;
  std::string tail_entity;
  int relation_id = 0;  // highest-confidence relation for the bag
  double confidence = 0.0;
  int best_sentence = -1;
  std::vector<double> relevance;
  std::vector<double> weights;
};

struct EvalReport {
  std::vector<std::pair<double, double>> curve;  // (recall, precision) per rank prefix
  std::map<int, double> p_at_n;
  double auc_pr = 0.0;
  std::vector<PredictedFact> facts;  // ranked
  std::vector<CaseDiagnostics> diagnostics;
};

// Confidence per relation id (index 0, NA, stays 0): the bag is aggregated
// once per candidate relation and scored with dropout off. `diagnostics`
// receives the state for the highest-confidence relation when non-null.
std::vector<double> score_bag(const Bag& bag, const ModelParams& params,
                              const ForwardConfig& config,
                              CaseDiagnostics* diagnostics = nullptr);

// All non-NA (pair, relation) labels of the test bags.
GoldSet gold_facts(const Dataset& test);

// Descending confidence; ties break on (head, tail, relation name) so
// rankings are reproducible.
std::vector<PredictedFact> rank_facts(std::vector<PredictedFact> facts,
                                      const RelationCatalog& relations);

// One (recall, precision) point per ranking prefix. Throws on an empty gold
// set.
std::vector<std::pair<double, double>> pr_curve(const std::vector<PredictedFact>& ranked,
                                                const GoldSet& gold);

// Precision among the top N ranked facts; falls back to min(N, count) with a
// warning when fewer facts exist.
double p_at_n(const std::vector<PredictedFact>& ranked, const GoldSet& gold, int n);

// Step-sum area under the precision-recall curve.
double auc_pr(const std::vector<std::pair<double, double>>& curve);

EvalReport evaluate(const Dataset& test, const ModelParams& params, const ForwardConfig& config,
                    const std::vector<int>& p_at_n_values, int threads = 1);

std::string report_to_string(const EvalReport& report, const RelationCatalog& relations);
void save_report(const std::string& path, const EvalReport& report,
                 const RelationCatalog& relations);
// Plain two-column "recall precision" text export.
void save_pr_text(const std::string& path, const EvalReport& report);

struct VariantSpec {
  std::string name;
  Hyperparams hyper;
  ForwardConfig forward;
};

struct VariantRow {
  std::string name;
  std::vector<std::uint64_t> seeds;
  std::vector<double> auc_per_seed;
  double mean_auc = 0.0;
  std::map<int, double> mean_p_at_n;
};

// Trains and evaluates each variant once per seed; rows aggregate the
// per-seed values.
std::vector<VariantRow> compare_variants(const Dataset& train_set, const Dataset& test_set,
                                         const std::vector<VariantSpec>& variants,
                                         const std::vector<std::uint64_t>& seeds,
                                         const std::vector<int>& p_at_n_values);

}  // namespace relex
