#include "relex/eval.h"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "json.hpp"
#include "relex/errors.h"

namespace relex {

using nlohmann::json;

std::vector<double> score_bag(const Bag& bag, const ModelParams& params,
                              const ForwardConfig& config, CaseDiagnostics* diagnostics) {
  // encode each sentence once; only the aggregation differs per relation
  std::vector<Vector> features;
  features.reserve(bag.sentences.size());
  for (const auto& s : bag.sentences)
    features.push_back(encode_sentence(s, params, config.attenuation).feature);

  const int n_rel = params.output.relations();
  std::vector<double> confidence(static_cast<std::size_t>(n_rel), 0.0);
  BagDiagnostics best_diag;
  int best_relation = -1;
  for (int r = 1; r < n_rel; ++r) {
    BagDiagnostics diag;
    Vector b = aggregate(features, config.strategy, config.relevance_mode, r, params.output,
                         diagnostics ? &diag : nullptr);
    const Vector p = softmax(logits(b, params.output));
    confidence[static_cast<std::size_t>(r)] = p[static_cast<std::size_t>(r)];
    if (diagnostics &&
        (best_relation < 0 ||
         confidence[static_cast<std::size_t>(r)] > confidence[static_cast<std::size_t>(best_relation)])) {
      best_relation = r;
      best_diag = diag;
    }
  }
  if (diagnostics) {
    diagnostics->head_entity = bag.head_entity;
    diagnostics->tail_entity = bag.tail_entity;
    diagnostics->relation_id = best_relation;
    diagnostics->confidence =
        best_relation < 0 ? 0.0 : confidence[static_cast<std::size_t>(best_relation)];
    diagnostics->best_sentence = best_diag.best_index;
    diagnostics->relevance = best_diag.relevance;
    diagnostics->weights = best_diag.weights;
  }
  return confidence;
}

GoldSet gold_facts(const Dataset& test) {
  GoldSet gold;
  for (const auto& bag : test.bags)
    for (int label : bag.label_ids)
      if (label != 0) gold.emplace(bag.head_entity, bag.tail_entity, label);
  return gold;
}

std::vector<PredictedFact> rank_facts(std::vector<PredictedFact> facts,
                                      const RelationCatalog& relations) {
  std::sort(facts.begin(), facts.end(),
            [&relations](const PredictedFact& a, const PredictedFact& b) {
              if (a.confidence != b.confidence) return a.confidence > b.confidence;
              if (a.head_entity != b.head_entity) return a.head_entity < b.head_entity;
              if (a.tail_entity != b.tail_entity) return a.tail_entity < b.tail_entity;
              return relations.name(a.relation_id) < relations.name(b.relation_id);
            });
  return facts;
}

std::vector<std::pair<double, double>> pr_curve(const std::vector<PredictedFact>& ranked,
                                                const GoldSet& gold) {
  if (gold.empty()) throw std::runtime_error("precision-recall needs a non-empty gold set");
  std::vector<std::pair<double, double>> curve;
  curve.reserve(ranked.size());
  int correct = 0;
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    const auto& f = ranked[i];
    if (gold.count({f.head_entity, f.tail_entity, f.relation_id})) ++correct;
    curve.emplace_back(static_cast<double>(correct) / static_cast<double>(gold.size()),
                       static_cast<double>(correct) / static_cast<double>(i + 1));
  }
  return curve;
}

double p_at_n(const std::vector<PredictedFact>& ranked, const GoldSet& gold, int n) {
  if (n < 1) throw ConfigError("precision cutoff must be positive");
  if (static_cast<std::size_t>(n) > ranked.size()) {
    std::cerr << "warning: only " << ranked.size() << " predictions for P@" << n
              << "; using all of them\n";
    n = static_cast<int>(ranked.size());
  }
  if (n == 0) return 0.0;
  int correct = 0;
  for (int i = 0; i < n; ++i) {
    const auto& f = ranked[static_cast<std::size_t>(i)];
    if (gold.count({f.head_entity, f.tail_entity, f.relation_id})) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(n);
}

double auc_pr(const std::vector<std::pair<double, double>>& curve) {
  double area = 0.0;
  double prev_recall = 0.0;
  for (const auto& [recall, precision] : curve) {
    area += (recall - prev_recall) * precision;
    prev_recall = recall;
  }
  return area;
}

EvalReport evaluate(const Dataset& test, const ModelParams& params, const ForwardConfig& config,
                    const std::vector<int>& p_at_n_values, int threads) {
  if (threads < 1) throw ConfigError("threads must be positive");
  const std::size_t n_bags = test.bags.size();
  std::vector<std::vector<double>> scores(n_bags);
  std::vector<CaseDiagnostics> diagnostics(n_bags);

  auto worker = [&](std::size_t begin, std::size_t stride) {
    for (std::size_t i = begin; i < n_bags; i += stride)
      scores[i] = score_bag(test.bags[i], params, config, &diagnostics[i]);
  };
  if (threads == 1 || n_bags < 2) {
    worker(0, 1);
  } else {
    // each thread writes its own pre-indexed slots, so output is
    // independent of scheduling
    const std::size_t t = std::min<std::size_t>(static_cast<std::size_t>(threads), n_bags);
    std::vector<std::thread> pool;
    pool.reserve(t);
    for (std::size_t i = 0; i < t; ++i) pool.emplace_back(worker, i, t);
    for (auto& th : pool) th.join();
  }

  EvalReport report;
  const int n_rel = params.output.relations();
  for (std::size_t i = 0; i < n_bags; ++i) {
    for (int r = 1; r < n_rel; ++r)
      report.facts.push_back({test.bags[i].head_entity, test.bags[i].tail_entity, r,
                              scores[i][static_cast<std::size_t>(r)]});
    report.diagnostics.push_back(std::move(diagnostics[i]));
  }
  report.facts = rank_facts(std::move(report.facts), test.relations);
  const GoldSet gold = gold_facts(test);
  report.curve = pr_curve(report.facts, gold);
  report.auc_pr = auc_pr(report.curve);
  for (int n : p_at_n_values) report.p_at_n[n] = p_at_n(report.facts, gold, n);
  return report;
}

std::string report_to_string(const EvalReport& report, const RelationCatalog& relations) {
  json j;
  json curve = json::array();
  for (const auto& [recall, precision] : report.curve) curve.push_back({recall, precision});
  j["curve"] = std::move(curve);
  json pn = json::object();
  for (const auto& [n, value] : report.p_at_n) pn[std::to_string(n)] = value;
  j["p_at_n"] = std::move(pn);
  j["auc_pr"] = report.auc_pr;
  json facts = json::array();
  for (const auto& f : report.facts)
    facts.push_back({{"head", f.head_entity},
                     {"tail", f.tail_entity},
                     {"relation", relations.name(f.relation_id)},
                     {"confidence", f.confidence}});
  j["facts"] = std::move(facts);
  json diags = json::array();
  for (const auto& d : report.diagnostics)
    diags.push_back({{"head", d.head_entity},
                     {"tail", d.tail_entity},
                     {"relation", d.relation_id < 0 ? "NA" : relations.name(d.relation_id)},
                     {"confidence", d.confidence},
                     {"best_sentence", d.best_sentence},
                     {"relevance", d.relevance},
                     {"weights", d.weights}});
  j["diagnostics"] = std::move(diags);
  return j.dump(2) + "\n";
}

void save_report(const std::string& path, const EvalReport& report,
                 const RelationCatalog& relations) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write report: " + path);
  out << report_to_string(report, relations);
  if (!out) throw std::runtime_error("write failed: " + path);
}

void save_pr_text(const std::string& path, const EvalReport& report) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write curve: " + path);
  for (const auto& [recall, precision] : report.curve)
    out << json(recall).dump() << ' ' << json(precision).dump() << '\n';
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::vector<VariantRow> compare_variants(const Dataset& train_set, const Dataset& test_set,
                                         const std::vector<VariantSpec>& variants,
                                         const std::vector<std::uint64_t>& seeds,
                                         const std::vector<int>& p_at_n_values) {
  std::vector<VariantRow> rows;
  for (const auto& variant : variants) {
    VariantRow row;
    row.name = variant.name;
    row.seeds = seeds;
    std::map<int, double> pn_total;
    for (std::uint64_t seed : seeds) {
      Hyperparams h = variant.hyper;
      h.seed = seed;
      TrainResult trained = train(train_set, h, variant.forward);
      EvalReport report = evaluate(test_set, trained.params, variant.forward, p_at_n_values);
      row.auc_per_seed.push_back(report.auc_pr);
      for (const auto& [n, value] : report.p_at_n) pn_total[n] += value;
    }
    for (double auc : row.auc_per_seed) row.mean_auc += auc;
    row.mean_auc /= static_cast<double>(row.auc_per_seed.size());
    for (const auto& [n, total] : pn_total)
      row.mean_p_at_n[n] = total / static_cast<double>(seeds.size());
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace relex
