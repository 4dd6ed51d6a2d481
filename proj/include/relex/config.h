#pragma once

#include <string>
#include <vector>

#include "relex/model.h"

namespace relex {

// One flat configuration document drives a run; command-line --override
// flags take precedence key by key.
struct RunConfig {
  Hyperparams hyper;
  ForwardConfig forward;
  bool freeze_word_embeddings = false;
  int threads = 1;
  std::string corpus;
  std::string relations;
  std::string embeddings;
  std::string checkpoint;
  std::string report;
  std::string trace;
};

// Strict JSON object: unknown keys and mistyped values raise ConfigError.
RunConfig parse_run_config(const std::string& text);
RunConfig load_run_config(const std::string& path);

// key=value with the same key names as the file.
void apply_override(RunConfig& config, const std::string& assignment);
void apply_overrides(RunConfig& config, const std::vector<std::string>& assignments);

// Documented key set, one "key  type  default  meaning" line each.
std::string run_config_schema();

}  // namespace relex
