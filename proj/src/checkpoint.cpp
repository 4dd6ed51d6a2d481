#include "relex/checkpoint.h"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace relex {

using nlohmann::json;

namespace {

json matrix_to_json(const Matrix& m) {
  json j;
  j["rows"] = m.rows;
  j["cols"] = m.cols;
  j["data"] = m.data;
  return j;
}

Matrix matrix_from_json(const json& j) {
  Matrix m(j.at("rows").get<int>(), j.at("cols").get<int>());
  auto data = j.at("data").get<std::vector<double>>();
  if (data.size() != m.data.size())
    throw std::runtime_error("checkpoint tensor data does not match its declared shape");
  m.data = std::move(data);
  return m;
}

json hyper_to_json(const Hyperparams& h) {
  json j;
  j["window"] = h.window;
  j["feature_maps"] = h.feature_maps;
  j["word_dim"] = h.word_dim;
  j["pos_dim"] = h.pos_dim;
  j["batch_size"] = h.batch_size;
  j["learning_rate"] = h.learning_rate;
  j["dropout"] = h.dropout;
  j["threshold"] = h.threshold;
  j["epochs"] = h.epochs;
  j["seed"] = h.seed;
  j["max_len"] = h.max_len;
  j["max_distance"] = h.max_distance;
  return j;
}

Hyperparams hyper_from_json(const json& j) {
  Hyperparams h;
  h.window = j.at("window").get<int>();
  h.feature_maps = j.at("feature_maps").get<int>();
  h.word_dim = j.at("word_dim").get<int>();
  h.pos_dim = j.at("pos_dim").get<int>();
  h.batch_size = j.at("batch_size").get<int>();
  h.learning_rate = j.at("learning_rate").get<double>();
  h.dropout = j.at("dropout").get<double>();
  h.threshold = j.at("threshold").get<int>();
  h.epochs = j.at("epochs").get<int>();
  h.seed = j.at("seed").get<std::uint64_t>();
  h.max_len = j.at("max_len").get<int>();
  h.max_distance = j.at("max_distance").get<int>();
  return h;
}

}  // namespace

std::string checkpoint_to_string(const Checkpoint& checkpoint) {
  json j;
  j["version"] = checkpoint.version;
  j["hyper"] = hyper_to_json(checkpoint.hyper);
  j["forward"] = {{"strategy", strategy_name(checkpoint.forward.strategy)},
                  {"relevance_mode", relevance_mode_name(checkpoint.forward.relevance_mode)},
                  {"attenuation", attenuation_mode_name(checkpoint.forward.attenuation.mode)},
                  {"attenuation_threshold", checkpoint.forward.attenuation.threshold}};
  j["freeze_word_embeddings"] = checkpoint.freeze_word_embeddings;
  j["vocabulary"] = checkpoint.vocabulary.words();
  j["relations"] = checkpoint.relations.names();
  json tensors;
  for_each_tensor(checkpoint.params,
                  [&](const char* name, const Matrix& m) { tensors[name] = matrix_to_json(m); });
  j["params"] = tensors;
  return j.dump(2) + "\n";
}

Checkpoint checkpoint_from_string(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("malformed checkpoint: ") + e.what());
  }
  Checkpoint c;
  c.version = j.at("version").get<int>();
  if (c.version != 1)
    throw std::runtime_error("unsupported checkpoint version " + std::to_string(c.version));
  c.hyper = hyper_from_json(j.at("hyper"));
  const json& fwd = j.at("forward");
  c.forward.strategy = parse_strategy(fwd.at("strategy").get<std::string>());
  c.forward.relevance_mode = parse_relevance_mode(fwd.at("relevance_mode").get<std::string>());
  c.forward.attenuation.mode = parse_attenuation_mode(fwd.at("attenuation").get<std::string>());
  c.forward.attenuation.threshold = fwd.at("attenuation_threshold").get<int>();
  c.freeze_word_embeddings = j.at("freeze_word_embeddings").get<bool>();
  c.vocabulary = Vocabulary::from_words(j.at("vocabulary").get<std::vector<std::string>>());
  c.relations = RelationCatalog::from_names(j.at("relations").get<std::vector<std::string>>());
  const json& tensors = j.at("params");
  for_each_tensor(c.params, [&](const char* name, Matrix& m) {
    m = matrix_from_json(tensors.at(name));
  });
  c.params.filters.window = c.hyper.window;
  c.params.filters.depth = c.hyper.depth();
  return c;
}

void save_checkpoint(const std::string& path, const Checkpoint& checkpoint) {
  std::ofstream out(path, std::ios::binary);  // binary: no newline translation
  if (!out) throw std::runtime_error("cannot write checkpoint: " + path);
  out << checkpoint_to_string(checkpoint);
  if (!out) throw std::runtime_error("write failed: " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open checkpoint: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return checkpoint_from_string(buf.str());
}

}  // namespace relex
