#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "relex/corpus.h"

namespace relex {

// Synthetic corpus families with planted, checkable structure:
//   Separable   - a relation-specific cue token sits next to an entity in
//                 every sentence of a relation bag
//   Attenuation - separable core plus a long tail of filler carrying cue
//                 tokens of other relations, all farther than the distance
//                 threshold from both entities
//   Relevance   - only a minority of each bag's sentences carry the cue;
//                 the rest are filler that may carry a decoy cue for some
//                 other relation
enum class SynthProfile { Separable, Attenuation, Relevance };

SynthProfile parse_profile(const std::string& name);
std::string profile_name(SynthProfile profile);

struct SynthConfig {
  SynthProfile profile = SynthProfile::Separable;
  int train_bags = 100;
  int test_bags = 0;
  int vocab_size = 200;
  int n_relations = 5;  // non-NA
  int entity_pool = 20;
  int bag_size_min = 1;
  int bag_size_max = 3;
  int sentence_len_min = 6;
  int sentence_len_max = 12;
  double na_fraction = 0.3;
  double minority_fraction = 0.25;  // relevance: fraction of cue sentences
  double decoy_prob = 0.5;          // relevance: decoy cue rate in filler
  int distractor_distance = 60;     // attenuation: cue placement threshold
  int distractor_cues_min = 3;
  int distractor_cues_max = 6;
  int max_len = 100;
};

struct SyntheticCorpus {
  std::vector<CorpusRecord> train_records;
  std::vector<CorpusRecord> test_records;
  std::vector<std::string> relation_names;  // "NA" first
  std::vector<std::string> vocabulary_words;
};

// Pure function of (config, seed).
SyntheticCorpus generate_synthetic(const SynthConfig& config, std::uint64_t seed);

// Assembles one split into a bag-grouped dataset with the fixed synthetic
// vocabulary and catalog.
Dataset synthetic_dataset(const SyntheticCorpus& corpus, bool test_split, BagMode mode,
                          int max_len);

// Token id of the cue word for a relation id (1-based relation ids).
int cue_token_id(int relation_id);

}  // namespace relex
