#include <cmath>
#include <string>
#include <vector>

#include "doctest.h"
#include "relex/eval.h"
#include "relex/synth.h"
#include "test_util.h"

using namespace relex;

namespace {

PredictedFact fact(const std::string& head, const std::string& tail, int relation,
                   double confidence) {
  return {head, tail, relation, confidence};
}

RelationCatalog catalog3() { return RelationCatalog::from_names({"NA", "r1", "r2"}); }

// One small separable train/test pair and a converged model, shared by the
// ranking tests below.
struct TrainedFixture {
  Dataset train_set;
  Dataset test_set;
  ModelParams params;
  ForwardConfig forward;
};

const TrainedFixture& trained_fixture() {
  static const TrainedFixture fixture = [] {
    SynthConfig cfg;
    cfg.train_bags = 60;
    cfg.test_bags = 30;
    cfg.vocab_size = 60;
    cfg.n_relations = 3;
    cfg.bag_size_min = 1;
    cfg.bag_size_max = 3;
    cfg.sentence_len_min = 4;
    cfg.sentence_len_max = 6;
    cfg.na_fraction = 0.2;
    SyntheticCorpus corpus = generate_synthetic(cfg, 33);

    TrainedFixture f;
    f.train_set = synthetic_dataset(corpus, false, BagMode::Train, cfg.max_len);
    f.test_set = synthetic_dataset(corpus, true, BagMode::Test, cfg.max_len);

    Hyperparams h;
    h.feature_maps = 8;
    h.word_dim = 6;
    h.pos_dim = 2;
    h.batch_size = 8;
    h.learning_rate = 0.3;
    h.epochs = 15;
    h.seed = 3;
    f.params = train(f.train_set, h, f.forward).params;
    return f;
  }();
  return fixture;
}

}  // namespace

TEST_CASE("an untrained zero output layer scores every relation uniformly") {
  Hyperparams h = testutil::toy_hyper();
  ModelParams params = testutil::toy_params(h, 5, 4, 2);
  params.output.weights.zero();
  params.output.bias.zero();

  Bag bag;
  bag.head_entity = "A";
  bag.tail_entity = "B";
  bag.sentences.push_back(testutil::make_sentence({0, 1, 2, 3}, 0, 2));
  bag.label_ids = {1};

  std::vector<double> scores = score_bag(bag, params, ForwardConfig{});
  REQUIRE(scores.size() == 4);
  CHECK(scores[0] == 0.0);  // NA is never scored
  for (int r = 1; r < 4; ++r) CHECK(scores[static_cast<std::size_t>(r)] == 0.25);
}

TEST_CASE("singleton bags score identically under every strategy") {
  Hyperparams h = testutil::toy_hyper();
  ModelParams params = testutil::toy_params(h, 5, 3, 3);
  Bag bag;
  bag.head_entity = "A";
  bag.tail_entity = "B";
  bag.sentences.push_back(testutil::make_sentence({4, 1, 0, 2, 3}, 1, 3));
  bag.label_ids = {1};

  ForwardConfig one, avg, noniid;
  one.strategy = AggregationStrategy::One;
  avg.strategy = AggregationStrategy::Avg;
  noniid.strategy = AggregationStrategy::NonIid;
  CHECK(score_bag(bag, params, one) == score_bag(bag, params, avg));
  CHECK(score_bag(bag, params, one) == score_bag(bag, params, noniid));
}

TEST_CASE("a converged model gives its training bags the gold top confidence") {
  const TrainedFixture& f = trained_fixture();
  int checked = 0;
  for (const auto& bag : f.train_set.bags) {
    const int gold = bag.label_ids.front();
    if (gold == 0) continue;
    std::vector<double> scores = score_bag(bag, f.params, f.forward);
    int arg = 1;
    for (int r = 2; r < f.train_set.relations.size(); ++r)
      if (scores[static_cast<std::size_t>(r)] > scores[static_cast<std::size_t>(arg)]) arg = r;
    CHECK(arg == gold);
    ++checked;
  }
  CHECK(checked > 20);
}

TEST_CASE("gold facts collect the non-NA labels of test bags") {
  const TrainedFixture& f = trained_fixture();
  GoldSet gold = gold_facts(f.test_set);
  CHECK_FALSE(gold.empty());
  int expected = 0;
  for (const auto& bag : f.test_set.bags)
    for (int label : bag.label_ids)
      if (label != 0) ++expected;
  CHECK(static_cast<int>(gold.size()) == expected);
  for (const auto& [head, tail, relation] : gold) CHECK(relation != 0);
}

TEST_CASE("the hand-counted three-point curve comes out right") {
  GoldSet gold = {{"A", "B", 1}, {"C", "D", 2}};
  std::vector<PredictedFact> ranked = {fact("A", "B", 1, 0.9), fact("E", "F", 1, 0.8),
                                       fact("C", "D", 2, 0.7)};
  auto curve = pr_curve(ranked, gold);
  REQUIRE(curve.size() == 3);
  CHECK(curve[0].first == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(curve[0].second == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(curve[1].first == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(curve[1].second == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(curve[2].first == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(curve[2].second == doctest::Approx(2.0 / 3.0).epsilon(1e-12));

  // and the step-sum area over that curve
  CHECK(auc_pr(curve) == doctest::Approx(0.5 * 1.0 + 0.5 * (2.0 / 3.0)).epsilon(1e-12));
}

TEST_CASE("all-correct predictions hold precision one along the curve") {
  GoldSet gold = {{"A", "B", 1}, {"C", "D", 1}, {"E", "F", 2}};
  std::vector<PredictedFact> ranked = {fact("A", "B", 1, 0.9), fact("C", "D", 1, 0.5),
                                       fact("E", "F", 2, 0.1)};
  for (const auto& [recall, precision] : pr_curve(ranked, gold)) CHECK(precision == 1.0);
}

TEST_CASE("recall never decreases and ends at the correct fraction") {
  const TrainedFixture& f = trained_fixture();
  EvalReport report = evaluate(f.test_set, f.params, f.forward, {10});
  double prev = 0.0;
  for (const auto& [recall, precision] : report.curve) {
    CHECK(recall >= prev);
    CHECK(precision >= 0.0);
    CHECK(precision <= 1.0);
    prev = recall;
  }
  GoldSet gold = gold_facts(f.test_set);
  int correct = 0;
  for (const auto& pred : report.facts)
    if (gold.count({pred.head_entity, pred.tail_entity, pred.relation_id})) ++correct;
  CHECK(report.curve.back().first ==
        doctest::Approx(static_cast<double>(correct) / static_cast<double>(gold.size()))
            .epsilon(1e-12));
}

TEST_CASE("an empty gold set is an error") {
  CHECK_THROWS_AS(pr_curve({fact("A", "B", 1, 0.9)}, GoldSet{}), std::exception);
}

TEST_CASE("tied confidences rank lexicographically by head, tail, relation name") {
  std::vector<PredictedFact> facts = {fact("B", "x", 1, 0.5), fact("A", "y", 2, 0.5),
                                      fact("A", "x", 2, 0.5), fact("A", "x", 1, 0.5),
                                      fact("C", "a", 1, 0.75)};
  std::vector<PredictedFact> ranked = rank_facts(facts, catalog3());
  CHECK(ranked[0].head_entity == "C");  // highest confidence first
  CHECK(ranked[1].head_entity == "A");
  CHECK(ranked[1].tail_entity == "x");
  CHECK(ranked[1].relation_id == 1);
  CHECK(ranked[2].relation_id == 2);  // same pair, relation name breaks the tie
  CHECK(ranked[3].tail_entity == "y");
  CHECK(ranked[4].head_entity == "B");
}

TEST_CASE("precision at N counts gold hits in the prefix") {
  GoldSet gold;
  std::vector<PredictedFact> ranked;
  for (int i = 0; i < 100; ++i) {
    std::string head = "h" + std::to_string(i);
    gold.emplace(head, "t", 1);
    ranked.push_back(fact(head, "t", 1, 1.0 - i * 0.001));
  }
  CHECK(p_at_n(ranked, gold, 100) == 1.0);

  GoldSet small_gold = {{"a", "t", 1}, {"b", "t", 1}};
  std::vector<PredictedFact> three = {fact("a", "t", 1, 0.9), fact("b", "t", 1, 0.8),
                                      fact("c", "t", 1, 0.7)};
  CHECK(p_at_n(three, small_gold, 3) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  // more cutoffs than facts: fall back to min(N, count)
  CHECK(p_at_n(three, small_gold, 50) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("P@N agrees with the curve prefix precision") {
  const TrainedFixture& f = trained_fixture();
  EvalReport report = evaluate(f.test_set, f.params, f.forward, {5, 10, 20});
  for (const auto& [n, value] : report.p_at_n) {
    REQUIRE(static_cast<std::size_t>(n) <= report.curve.size());
    CHECK(value == doctest::Approx(report.curve[static_cast<std::size_t>(n) - 1].second)
                       .epsilon(1e-12));
  }
}

TEST_CASE("facts never include NA and cover every bag-relation pair") {
  const TrainedFixture& f = trained_fixture();
  EvalReport report = evaluate(f.test_set, f.params, f.forward, {10});
  CHECK(report.facts.size() ==
        f.test_set.bags.size() * static_cast<std::size_t>(f.test_set.relations.size() - 1));
  for (const auto& pred : report.facts) CHECK(pred.relation_id != 0);
}

TEST_CASE("multi-threaded scoring reproduces the single-threaded report") {
  const TrainedFixture& f = trained_fixture();
  EvalReport one = evaluate(f.test_set, f.params, f.forward, {10}, 1);
  EvalReport four = evaluate(f.test_set, f.params, f.forward, {10}, 4);
  CHECK(report_to_string(one, f.test_set.relations) ==
        report_to_string(four, f.test_set.relations));
}

TEST_CASE("report files serialize the curve and metrics") {
  const TrainedFixture& f = trained_fixture();
  EvalReport report = evaluate(f.test_set, f.params, f.forward, {10});
  const auto dir = testutil::scratch_dir("relex_test_eval_report");
  save_report((dir / "report.json").string(), report, f.test_set.relations);
  save_pr_text((dir / "curve.txt").string(), report);

  const std::string text = testutil::read_file(dir / "report.json");
  CHECK(text.find("\"auc_pr\"") != std::string::npos);
  CHECK(text.find("\"p_at_n\"") != std::string::npos);
  CHECK(text.find("\"diagnostics\"") != std::string::npos);

  const std::string curve = testutil::read_file(dir / "curve.txt");
  std::size_t lines = 0;
  for (char c : curve) lines += c == '\n';
  CHECK(lines == report.curve.size());
}

TEST_CASE("variant comparison with one seed equals the direct evaluation") {
  const TrainedFixture& f = trained_fixture();

  VariantSpec spec;
  spec.name = "baseline";
  spec.hyper.feature_maps = 8;
  spec.hyper.word_dim = 6;
  spec.hyper.pos_dim = 2;
  spec.hyper.batch_size = 8;
  spec.hyper.learning_rate = 0.3;
  spec.hyper.epochs = 4;
  std::vector<VariantRow> rows =
      compare_variants(f.train_set, f.test_set, {spec}, {7}, {10});
  REQUIRE(rows.size() == 1);
  REQUIRE(rows[0].auc_per_seed.size() == 1);
  CHECK(rows[0].mean_auc == rows[0].auc_per_seed[0]);

  Hyperparams h = spec.hyper;
  h.seed = 7;
  TrainResult direct = train(f.train_set, h, spec.forward);
  EvalReport report = evaluate(f.test_set, direct.params, spec.forward, {10});
  CHECK(rows[0].auc_per_seed[0] == report.auc_pr);
  CHECK(rows[0].mean_p_at_n.at(10) == report.p_at_n.at(10));

  // identical variants produce identical rows
  VariantSpec copy = spec;
  copy.name = "copy";
  std::vector<VariantRow> both =
      compare_variants(f.train_set, f.test_set, {spec, copy}, {7}, {10});
  CHECK(both[0].auc_per_seed == both[1].auc_per_seed);
}

TEST_CASE("case diagnostics surface the winning relation's attention") {
  const TrainedFixture& f = trained_fixture();
  const Bag* multi = nullptr;
  for (const auto& bag : f.test_set.bags)
    if (bag.size() >= 2 && bag.label_ids.front() != 0) multi = &bag;
  REQUIRE(multi != nullptr);

  CaseDiagnostics diag;
  std::vector<double> scores = score_bag(*multi, f.params, f.forward, &diag);
  CHECK(diag.head_entity == multi->head_entity);
  CHECK(diag.tail_entity == multi->tail_entity);
  REQUIRE(diag.relation_id >= 1);
  CHECK(diag.confidence == scores[static_cast<std::size_t>(diag.relation_id)]);
  CHECK(diag.best_sentence >= 0);
  CHECK(diag.weights.size() == static_cast<std::size_t>(multi->size()));
}
