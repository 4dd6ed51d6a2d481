#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "relex/checkpoint.h"
#include "relex/config.h"
#include "relex/errors.h"
#include "relex/eval.h"
#include "relex/gradcheck.h"
#include "relex/synth.h"
#include "relex/trainer.h"

namespace {

constexpr long long kGradCheckParameterCap = 10000;

std::string format_double(double v) { return nlohmann::json(v).dump(); }

relex::RunConfig resolve_config(const std::string& config_path,
                                const std::vector<std::string>& overrides) {
  relex::RunConfig config;
  if (!config_path.empty()) config = relex::load_run_config(config_path);
  relex::apply_overrides(config, overrides);
  return config;
}

relex::Dataset load_with(const relex::RunConfig& config, const relex::Vocabulary& vocabulary,
                         const relex::RelationCatalog& relations, int max_len,
                         relex::BagMode mode) {
  relex::Dataset ds = relex::load_corpus(config.corpus, vocabulary, relations, max_len, mode);
  if (ds.rejected_records > 0)
    std::cerr << "warning: rejected " << ds.rejected_records << " record(s) from "
              << config.corpus << "\n";
  return ds;
}

int run_train(const relex::RunConfig& config) {
  if (config.corpus.empty()) throw relex::ConfigError("train needs the 'corpus' key");
  if (config.relations.empty()) throw relex::ConfigError("train needs the 'relations' key");
  if (config.checkpoint.empty()) throw relex::ConfigError("train needs the 'checkpoint' key");

  relex::RelationCatalog catalog = relex::RelationCatalog::load(config.relations);
  std::vector<relex::CorpusRecord> records = relex::read_corpus_records(config.corpus);
  relex::Vocabulary vocabulary = relex::build_vocabulary(records);
  relex::Dataset dataset = relex::build_dataset(records, vocabulary, catalog,
                                                config.hyper.max_len, relex::BagMode::Train,
                                                config.corpus);
  if (dataset.rejected_records > 0)
    std::cerr << "warning: rejected " << dataset.rejected_records << " record(s) from "
              << config.corpus << "\n";

  relex::TrainOptions options;
  options.embeddings_path = config.embeddings;
  options.freeze_word_embeddings = config.freeze_word_embeddings;
  relex::TrainResult result = relex::train(dataset, config.hyper, config.forward, options);

  relex::Checkpoint checkpoint;
  checkpoint.hyper = config.hyper;
  checkpoint.forward = config.forward;
  checkpoint.freeze_word_embeddings = config.freeze_word_embeddings;
  checkpoint.vocabulary = dataset.vocabulary;
  checkpoint.relations = dataset.relations;
  checkpoint.params = std::move(result.params);
  relex::save_checkpoint(config.checkpoint, checkpoint);

  const std::string trace_path =
      config.trace.empty() ? config.checkpoint + ".trace" : config.trace;
  std::ofstream trace(trace_path, std::ios::binary);
  if (!trace) throw std::runtime_error("cannot write trace: " + trace_path);
  for (std::size_t e = 0; e < result.epoch_loss.size(); ++e)
    trace << (e + 1) << ',' << format_double(result.epoch_loss[e]) << '\n';
  if (!trace) throw std::runtime_error("write failed: " + trace_path);

  std::cout << "trained " << dataset.bags.size() << " bag(s), " << config.hyper.epochs
            << " epoch(s)\n";
  std::cout << "final loss " << format_double(result.epoch_loss.back()) << "\n";
  return 0;
}

int run_eval(const relex::RunConfig& config, const std::vector<int>& n_values,
             const std::string& pr_text_path) {
  if (config.checkpoint.empty()) throw relex::ConfigError("eval needs the 'checkpoint' key");
  if (config.corpus.empty()) throw relex::ConfigError("eval needs the 'corpus' key");
  if (config.report.empty()) throw relex::ConfigError("eval needs the 'report' key");

  relex::Checkpoint checkpoint = relex::load_checkpoint(config.checkpoint);
  if (!config.relations.empty()) {
    relex::RelationCatalog catalog = relex::RelationCatalog::load(config.relations);
    if (catalog.names() != checkpoint.relations.names())
      throw relex::ConfigError("relation catalog does not match the checkpoint");
  }
  relex::Dataset test = load_with(config, checkpoint.vocabulary, checkpoint.relations,
                                  checkpoint.hyper.max_len, relex::BagMode::Test);

  relex::EvalReport report =
      relex::evaluate(test, checkpoint.params, checkpoint.forward, n_values, config.threads);
  relex::save_report(config.report, report, checkpoint.relations);
  if (!pr_text_path.empty()) relex::save_pr_text(pr_text_path, report);

  for (const auto& [n, value] : report.p_at_n)
    std::cout << "P@" << n << " " << format_double(value) << "\n";
  std::cout << "AUC-PR " << format_double(report.auc_pr) << "\n";
  return 0;
}

int run_predict(const relex::RunConfig& config, int top_k) {
  if (top_k < 1) throw relex::ConfigError("top_k must be positive");
  if (config.checkpoint.empty()) throw relex::ConfigError("predict needs the 'checkpoint' key");
  if (config.corpus.empty()) throw relex::ConfigError("predict needs the 'corpus' key");

  relex::Checkpoint checkpoint = relex::load_checkpoint(config.checkpoint);
  relex::Dataset corpus = load_with(config, checkpoint.vocabulary, checkpoint.relations,
                                    checkpoint.hyper.max_len, relex::BagMode::Test);

  std::vector<relex::PredictedFact> facts;
  for (const auto& bag : corpus.bags) {
    std::vector<double> scores = relex::score_bag(bag, checkpoint.params, checkpoint.forward);
    for (int r = 1; r < checkpoint.relations.size(); ++r)
      facts.push_back({bag.head_entity, bag.tail_entity, r, scores[static_cast<std::size_t>(r)]});
  }
  facts = relex::rank_facts(std::move(facts), checkpoint.relations);
  const std::size_t limit = std::min<std::size_t>(facts.size(), static_cast<std::size_t>(top_k));
  for (std::size_t i = 0; i < limit; ++i)
    std::cout << facts[i].head_entity << '\t' << facts[i].tail_entity << '\t'
              << checkpoint.relations.name(facts[i].relation_id) << '\t'
              << format_double(facts[i].confidence) << '\n';
  return 0;
}

int run_synth(const relex::SynthConfig& synth, std::uint64_t seed, const std::string& out_dir) {
  relex::SyntheticCorpus corpus = relex::generate_synthetic(synth, seed);
  std::filesystem::create_directories(out_dir);
  const std::string train_path = out_dir + "/train.jsonl";
  const std::string test_path = out_dir + "/test.jsonl";
  const std::string relations_path = out_dir + "/relations.txt";
  relex::write_corpus_records(train_path, corpus.train_records);
  relex::RelationCatalog::from_names(corpus.relation_names).save(relations_path);
  std::cout << "wrote " << corpus.train_records.size() << " train record(s) to " << train_path
            << "\n";
  if (!corpus.test_records.empty()) {
    relex::write_corpus_records(test_path, corpus.test_records);
    std::cout << "wrote " << corpus.test_records.size() << " test record(s) to " << test_path
              << "\n";
  }
  std::cout << "wrote " << corpus.relation_names.size() << " relation(s) to " << relations_path
            << "\n";
  return 0;
}

// Self-contained toy problem sized for fast finite differencing; the
// configuration only adjusts dimensions and modes.
int run_gradcheck(const relex::RunConfig& config, double tolerance, double step, bool corrupt) {
  relex::validate_hyperparams(config.hyper);

  relex::Rng rng(config.hyper.seed);
  const int vocab_size = 5;
  const int n_relations = 3;
  relex::ModelParams params =
      relex::init_params(config.hyper, vocab_size, n_relations, std::nullopt, rng);
  const long long count = relex::parameter_count(params);
  if (count > kGradCheckParameterCap)
    throw relex::ConfigError("gradcheck configuration has " + std::to_string(count) +
                             " parameters; the cap is " +
                             std::to_string(kGradCheckParameterCap));

  if (config.hyper.max_len < 9)
    throw relex::ConfigError("gradcheck needs max_len of at least 9");
  auto make_sentence = [&](int length, int head, int tail) {
    relex::SentenceInstance s;
    s.head_pos = head;
    s.tail_pos = tail;
    s.relation_id = 1;
    for (int i = 0; i < length; ++i) s.token_ids.push_back(rng.below_int(vocab_size));
    return s;
  };
  relex::Bag bag;
  bag.head_entity = "head";
  bag.tail_entity = "tail";
  bag.sentences.push_back(make_sentence(7, 1, 4));  // non-empty third segment
  bag.sentences.push_back(make_sentence(9, 8, 2));  // reversed entities, empty third segment
  bag.label_ids = {1};

  relex::GradCheckOptions options;
  options.tolerance = tolerance;
  options.h = step;
  options.corrupt_scale = corrupt ? 2.0 : 1.0;
  relex::GradCheckReport report =
      relex::gradient_check({&bag}, params, config.forward, options);

  for (const auto& tensor : report.tensors)
    std::cout << tensor.name << " checked " << tensor.checked << " worst "
              << format_double(tensor.worst_error) << (tensor.pass ? "" : " FAIL") << "\n";
  std::cout << "gradcheck " << (report.pass ? "PASS" : "FAIL") << " worst "
            << format_double(report.worst_error) << " tolerance " << format_double(tolerance)
            << "\n";
  return report.pass ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Distant-supervision relation extraction toolkit"};
  app.require_subcommand(1);
  app.footer("configuration keys (for --config files and --override):\n" +
             relex::run_config_schema());

  std::string config_path;
  std::vector<std::string> overrides;
  std::vector<int> n_values;
  std::string pr_text_path;
  int top_k = 10;
  double tolerance = 1e-4;
  double step = 1e-5;
  bool corrupt = false;

  auto add_config_options = [&](CLI::App* cmd) {
    cmd->add_option("-c,--config", config_path, "run configuration file (JSON object)");
    cmd->add_option("--override", overrides, "key=value taking precedence over the file");
  };

  CLI::App* train_cmd = app.add_subcommand("train", "train a model and write a checkpoint");
  add_config_options(train_cmd);

  CLI::App* eval_cmd = app.add_subcommand("eval", "evaluate a checkpoint on a test corpus");
  add_config_options(eval_cmd);
  eval_cmd->add_option("-n,--n", n_values, "P@N cutoffs (default 100 200 300)");
  eval_cmd->add_option("--pr-text", pr_text_path, "also write a two-column recall/precision file");

  CLI::App* predict_cmd = app.add_subcommand("predict", "print the top ranked facts");
  add_config_options(predict_cmd);
  predict_cmd->add_option("-k,--top-k", top_k, "number of facts to print");

  CLI::App* synth_cmd = app.add_subcommand("synth", "generate a synthetic corpus");
  relex::SynthConfig synth;
  std::string profile_name = "separable";
  std::uint64_t synth_seed = 1;
  std::string out_dir = "synth";
  synth_cmd->add_option("--profile", profile_name, "separable | attenuation | relevance");
  synth_cmd->add_option("--seed", synth_seed, "generator seed");
  synth_cmd->add_option("--out-dir", out_dir, "output directory");
  synth_cmd->add_option("--train-bags", synth.train_bags, "training bags");
  synth_cmd->add_option("--test-bags", synth.test_bags, "held-out bags");
  synth_cmd->add_option("--vocab-size", synth.vocab_size, "vocabulary size");
  synth_cmd->add_option("--relations", synth.n_relations, "non-NA relation count");
  synth_cmd->add_option("--entity-pool", synth.entity_pool, "entity mention tokens");
  synth_cmd->add_option("--bag-size-min", synth.bag_size_min, "minimum sentences per bag");
  synth_cmd->add_option("--bag-size-max", synth.bag_size_max, "maximum sentences per bag");
  synth_cmd->add_option("--sentence-len-min", synth.sentence_len_min, "minimum core length");
  synth_cmd->add_option("--sentence-len-max", synth.sentence_len_max, "maximum core length");
  synth_cmd->add_option("--na-fraction", synth.na_fraction, "fraction of NA bags");
  synth_cmd->add_option("--minority-fraction", synth.minority_fraction,
                        "relevance: fraction of cue sentences");
  synth_cmd->add_option("--decoy-prob", synth.decoy_prob, "relevance: decoy cue rate");
  synth_cmd->add_option("--distractor-distance", synth.distractor_distance,
                        "attenuation: cue distance cutoff");
  synth_cmd->add_option("--distractor-cues-min", synth.distractor_cues_min,
                        "attenuation: minimum far cues");
  synth_cmd->add_option("--distractor-cues-max", synth.distractor_cues_max,
                        "attenuation: maximum far cues");
  synth_cmd->add_option("--max-len", synth.max_len, "sentence length bound");

  CLI::App* gradcheck_cmd =
      app.add_subcommand("gradcheck", "compare analytic gradients with finite differences");
  add_config_options(gradcheck_cmd);
  gradcheck_cmd->add_option("--tol", tolerance, "maximum relative error");
  gradcheck_cmd->add_option("--step", step, "finite-difference step");
  gradcheck_cmd->add_flag("--corrupt", corrupt, "scale analytic gradients x2 (negative control)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*train_cmd) return run_train(resolve_config(config_path, overrides));
    if (*eval_cmd) {
      if (n_values.empty()) n_values = {100, 200, 300};
      return run_eval(resolve_config(config_path, overrides), n_values, pr_text_path);
    }
    if (*predict_cmd) return run_predict(resolve_config(config_path, overrides), top_k);
    if (*synth_cmd) {
      synth.profile = relex::parse_profile(profile_name);
      return run_synth(synth, synth_seed, out_dir);
    }
    if (*gradcheck_cmd) {
      // toy dimensions keep finite differencing fast; overridable
      relex::RunConfig config;
      config.hyper.word_dim = 4;
      config.hyper.pos_dim = 2;
      config.hyper.feature_maps = 3;
      config.hyper.max_len = 12;
      if (!config_path.empty()) config = relex::load_run_config(config_path);
      relex::apply_overrides(config, overrides);
      return run_gradcheck(config, tolerance, step, corrupt);
    }
  } catch (const relex::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
