#pragma once

#include <string>

#include "relex/model.h"

namespace relex {

// Self-contained trained model: parameters plus everything needed to score
// new corpora the same way the training run would have.
struct Checkpoint {
  int version = 1;
  Hyperparams hyper;
  ForwardConfig forward;
  bool freeze_word_embeddings = false;
  Vocabulary vocabulary;
  RelationCatalog relations;
  ModelParams params;
};

// Versioned JSON text with tensors as decimal arrays and declared shapes.
// Serialization round-trips every double exactly.
std::string checkpoint_to_string(const Checkpoint& checkpoint);
Checkpoint checkpoint_from_string(const std::string& text);

void save_checkpoint(const std::string& path, const Checkpoint& checkpoint);
Checkpoint load_checkpoint(const std::string& path);

}  // namespace relex
