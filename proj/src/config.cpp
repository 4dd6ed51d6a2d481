#include "relex/config.h"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "relex/errors.h"

namespace relex {

using nlohmann::json;

namespace {

enum class Kind { Int, Double, Bool, Seed, String, Choice };

struct KeyInfo {
  const char* key;
  Kind kind;
  const char* fallback;
  const char* meaning;
};

// One table drives parsing, overrides, and the schema listing.
constexpr KeyInfo kKeys[] = {
    {"window", Kind::Int, "3", "convolution window size (odd)"},
    {"feature_maps", Kind::Int, "230", "number of convolution filters"},
    {"word_dim", Kind::Int, "50", "word embedding width"},
    {"pos_dim", Kind::Int, "5", "position embedding width"},
    {"batch_size", Kind::Int, "160", "bags per SGD minibatch"},
    {"learning_rate", Kind::Double, "0.01", "SGD step size"},
    {"dropout", Kind::Double, "0.5", "dropout rate on the bag vector"},
    {"threshold", Kind::Int, "60", "attenuation distance cutoff"},
    {"epochs", Kind::Int, "14", "training epochs"},
    {"seed", Kind::Seed, "1", "random seed for the whole run"},
    {"max_len", Kind::Int, "100", "maximum sentence length in tokens"},
    {"max_distance", Kind::Int, "0", "position table clip range (0 = max_len)"},
    {"strategy", Kind::Choice, "noniid", "bag aggregation: one | avg | noniid"},
    {"relevance_mode", Kind::Choice, "clamped", "relevance normalization: clamped | literal"},
    {"attenuation", Kind::Choice, "linear", "word weighting: constant | linear"},
    {"freeze_word_embeddings", Kind::Bool, "false", "skip word table updates"},
    {"threads", Kind::Int, "1", "evaluation scoring threads"},
    {"corpus", Kind::String, "", "corpus path (JSON lines)"},
    {"relations", Kind::String, "", "relation catalog path"},
    {"embeddings", Kind::String, "", "pretrained word vectors path"},
    {"checkpoint", Kind::String, "", "model checkpoint path"},
    {"report", Kind::String, "", "evaluation report path"},
    {"trace", Kind::String, "", "per-epoch loss trace path"},
};

const KeyInfo* find_key(const std::string& key) {
  for (const auto& info : kKeys)
    if (key == info.key) return &info;
  return nullptr;
}

void assign(RunConfig& c, const std::string& key, const json& value) {
  const KeyInfo* info = find_key(key);
  if (!info) throw ConfigError("unknown configuration key: " + key);

  auto type_error = [&]() -> ConfigError {
    return ConfigError("configuration key " + key + " has the wrong type");
  };
  switch (info->kind) {
    case Kind::Int:
      if (!value.is_number_integer()) throw type_error();
      break;
    case Kind::Double:
      if (!value.is_number()) throw type_error();
      break;
    case Kind::Bool:
      if (!value.is_boolean()) throw type_error();
      break;
    case Kind::Seed:
      if (!value.is_number_integer() || (value.is_number_integer() && value.get<long long>() < 0 &&
                                         !value.is_number_unsigned()))
        throw type_error();
      break;
    case Kind::String:
    case Kind::Choice:
      if (!value.is_string()) throw type_error();
      break;
  }

  if (key == "window") c.hyper.window = value.get<int>();
  else if (key == "feature_maps") c.hyper.feature_maps = value.get<int>();
  else if (key == "word_dim") c.hyper.word_dim = value.get<int>();
  else if (key == "pos_dim") c.hyper.pos_dim = value.get<int>();
  else if (key == "batch_size") c.hyper.batch_size = value.get<int>();
  else if (key == "learning_rate") c.hyper.learning_rate = value.get<double>();
  else if (key == "dropout") c.hyper.dropout = value.get<double>();
  else if (key == "threshold") {
    c.hyper.threshold = value.get<int>();
    c.forward.attenuation.threshold = c.hyper.threshold;
  } else if (key == "epochs") c.hyper.epochs = value.get<int>();
  else if (key == "seed") c.hyper.seed = value.get<std::uint64_t>();
  else if (key == "max_len") c.hyper.max_len = value.get<int>();
  else if (key == "max_distance") c.hyper.max_distance = value.get<int>();
  else if (key == "strategy") c.forward.strategy = parse_strategy(value.get<std::string>());
  else if (key == "relevance_mode")
    c.forward.relevance_mode = parse_relevance_mode(value.get<std::string>());
  else if (key == "attenuation")
    c.forward.attenuation.mode = parse_attenuation_mode(value.get<std::string>());
  else if (key == "freeze_word_embeddings") c.freeze_word_embeddings = value.get<bool>();
  else if (key == "threads") c.threads = value.get<int>();
  else if (key == "corpus") c.corpus = value.get<std::string>();
  else if (key == "relations") c.relations = value.get<std::string>();
  else if (key == "embeddings") c.embeddings = value.get<std::string>();
  else if (key == "checkpoint") c.checkpoint = value.get<std::string>();
  else if (key == "report") c.report = value.get<std::string>();
  else if (key == "trace") c.trace = value.get<std::string>();
}

json value_from_text(const KeyInfo& info, const std::string& text) {
  try {
    switch (info.kind) {
      case Kind::Int: {
        std::size_t used = 0;
        int v = std::stoi(text, &used);
        if (used != text.size()) throw ConfigError("");
        return v;
      }
      case Kind::Double: {
        std::size_t used = 0;
        double v = std::stod(text, &used);
        if (used != text.size()) throw ConfigError("");
        return v;
      }
      case Kind::Seed: {
        std::size_t used = 0;
        unsigned long long v = std::stoull(text, &used);
        if (used != text.size() || text.front() == '-') throw ConfigError("");
        return static_cast<std::uint64_t>(v);
      }
      case Kind::Bool:
        if (text == "true" || text == "1") return true;
        if (text == "false" || text == "0") return false;
        throw ConfigError("");
      case Kind::String:
      case Kind::Choice:
        return text;
    }
  } catch (const std::exception&) {
    throw ConfigError(std::string("cannot parse value for ") + info.key + ": " + text);
  }
  throw ConfigError(std::string("cannot parse value for ") + info.key);
}

}  // namespace

RunConfig parse_run_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed configuration: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("configuration must be a JSON object");
  RunConfig c;
  for (const auto& [key, value] : j.items()) assign(c, key, value);
  validate_hyperparams(c.hyper);
  if (c.threads < 1) throw ConfigError("threads must be positive");
  return c;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open configuration: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_run_config(buf.str());
}

void apply_override(RunConfig& config, const std::string& assignment) {
  const std::size_t eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0)
    throw ConfigError("override must look like key=value: " + assignment);
  const std::string key = assignment.substr(0, eq);
  const std::string value = assignment.substr(eq + 1);
  const KeyInfo* info = find_key(key);
  if (!info) throw ConfigError("unknown configuration key: " + key);
  assign(config, key, value_from_text(*info, value));
}

void apply_overrides(RunConfig& config, const std::vector<std::string>& assignments) {
  for (const auto& a : assignments) apply_override(config, a);
  validate_hyperparams(config.hyper);
  if (config.threads < 1) throw ConfigError("threads must be positive");
}

std::string run_config_schema() {
  std::ostringstream out;
  for (const auto& info : kKeys) {
    const char* type = "";
    switch (info.kind) {
      case Kind::Int: type = "int"; break;
      case Kind::Double: type = "float"; break;
      case Kind::Bool: type = "bool"; break;
      case Kind::Seed: type = "uint"; break;
      case Kind::String: type = "string"; break;
      case Kind::Choice: type = "choice"; break;
    }
    out << "  " << info.key;
    for (std::size_t pad = std::string(info.key).size(); pad < 24; ++pad) out << ' ';
    out << type;
    for (std::size_t pad = std::string(type).size(); pad < 8; ++pad) out << ' ';
    out << (info.fallback[0] ? info.fallback : "(empty)");
    for (std::size_t pad = std::string(info.fallback[0] ? info.fallback : "(empty)").size();
         pad < 10; ++pad)
      out << ' ';
    out << info.meaning << '\n';
  }
  return out.str();
}

}  // namespace relex
