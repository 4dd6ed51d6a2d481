#include "relex/synth.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "relex/errors.h"
#include "relex/rng.h"

namespace relex {

SynthProfile parse_profile(const std::string& name) {
  if (name == "separable") return SynthProfile::Separable;
  if (name == "attenuation") return SynthProfile::Attenuation;
  if (name == "relevance") return SynthProfile::Relevance;
  throw ConfigError("unknown synthetic profile: " + name);
}

std::string profile_name(SynthProfile profile) {
  switch (profile) {
    case SynthProfile::Separable: return "separable";
    case SynthProfile::Attenuation: return "attenuation";
    default: return "relevance";
  }
}

int cue_token_id(int relation_id) { return relation_id - 1; }

namespace {

// Fixed vocabulary layout: cue tokens for relations 1..N first, then the
// entity mention pool, then filler.
struct TokenRanges {
  int n_relations = 0;
  int entity_pool = 0;
  int filler_count = 0;

  int entity_base() const { return n_relations; }
  int filler_base() const { return n_relations + entity_pool; }
};

int random_entity(const TokenRanges& tok, Rng& rng) {
  return tok.entity_base() + rng.below_int(tok.entity_pool);
}

int random_filler(const TokenRanges& tok, Rng& rng) {
  return tok.filler_base() + rng.below_int(tok.filler_count);
}

struct BuiltSentence {
  std::vector<int> tokens;
  int head = 0;
  int tail = 0;
};

// Distinct mention positions, uniform over ordered pairs.
std::pair<int, int> entity_positions(int len, Rng& rng) {
  int h = rng.below_int(len);
  int t = rng.below_int(len - 1);
  if (t >= h) ++t;
  return {h, t};
}

// A free slot directly beside one of the two mentions; -1 when none exists.
int cue_slot(int len, int h, int t, Rng& rng) {
  const int candidates[4] = {h - 1, h + 1, t - 1, t + 1};
  int valid[4];
  int n = 0;
  for (int c : candidates) {
    if (c < 0 || c >= len || c == h || c == t) continue;
    bool dup = false;
    for (int i = 0; i < n; ++i) dup = dup || valid[i] == c;
    if (!dup) valid[n++] = c;
  }
  return n == 0 ? -1 : valid[rng.below_int(n)];
}

// Filler sentence with two mentions; when cue_relation > 0 its cue token
// lands beside a mention.
BuiltSentence core_sentence(const SynthConfig& cfg, const TokenRanges& tok, int cue_relation,
                            Rng& rng) {
  for (int attempt = 0; attempt < 16; ++attempt) {
    const int len =
        cfg.sentence_len_min + rng.below_int(cfg.sentence_len_max - cfg.sentence_len_min + 1);
    BuiltSentence s;
    s.tokens.resize(static_cast<std::size_t>(len));
    for (auto& t : s.tokens) t = random_filler(tok, rng);
    auto [h, t] = entity_positions(len, rng);
    s.head = h;
    s.tail = t;
    s.tokens[static_cast<std::size_t>(h)] = random_entity(tok, rng);
    s.tokens[static_cast<std::size_t>(t)] = random_entity(tok, rng);
    if (cue_relation > 0) {
      const int slot = cue_slot(len, h, t, rng);
      if (slot < 0) continue;
      s.tokens[static_cast<std::size_t>(slot)] = cue_token_id(cue_relation);
    }
    return s;
  }
  throw std::runtime_error("no room for a cue token; raise sentence_len_min");
}

// Core sentence followed by a far block past the distance cutoff from both
// mentions: unmarked entity tokens with cue tokens of other relations, so
// proximity is the only difference between the true cue and the far ones.
BuiltSentence attenuation_sentence(const SynthConfig& cfg, const TokenRanges& tok,
                                   int true_relation, Rng& rng) {
  BuiltSentence s = core_sentence(cfg, tok, true_relation, rng);
  const std::size_t far_start =
      static_cast<std::size_t>(std::max(s.head, s.tail) + cfg.distractor_distance + 1);
  const int n_distractors =
      cfg.distractor_cues_min +
      rng.below_int(cfg.distractor_cues_max - cfg.distractor_cues_min + 1);
  while (s.tokens.size() < far_start) s.tokens.push_back(random_filler(tok, rng));
  for (int i = 0; i < n_distractors; ++i) {
    int wrong = 1 + rng.below_int(cfg.n_relations);
    while (true_relation > 0 && wrong == true_relation)
      wrong = 1 + rng.below_int(cfg.n_relations);
    s.tokens.push_back(random_entity(tok, rng));
    s.tokens.push_back(cue_token_id(wrong));
    s.tokens.push_back(random_filler(tok, rng));
  }
  if (static_cast<int>(s.tokens.size()) > cfg.max_len)
    throw ConfigError("attenuation sentences exceed max_len; lower distractor_distance");
  return s;
}

void validate_synth(const SynthConfig& cfg) {
  if (cfg.train_bags < 0 || cfg.test_bags < 0 || cfg.train_bags + cfg.test_bags < 1)
    throw ConfigError("need at least one bag");
  if (cfg.n_relations < 1) throw ConfigError("need at least one relation");
  if (cfg.entity_pool < 2) throw ConfigError("entity_pool must be at least 2");
  if (cfg.vocab_size < cfg.n_relations + cfg.entity_pool + 8)
    throw ConfigError("vocab_size too small for cues, entities, and filler");
  if (cfg.bag_size_min < 1 || cfg.bag_size_max < cfg.bag_size_min)
    throw ConfigError("bad bag size range");
  if (cfg.sentence_len_min < 4 || cfg.sentence_len_max < cfg.sentence_len_min)
    throw ConfigError("bad sentence length range (minimum 4)");
  if (cfg.sentence_len_max > cfg.max_len) throw ConfigError("sentence_len_max exceeds max_len");
  if (cfg.na_fraction < 0.0 || cfg.na_fraction > 1.0)
    throw ConfigError("na_fraction must be in [0, 1]");
  if (cfg.minority_fraction <= 0.0 || cfg.minority_fraction > 1.0)
    throw ConfigError("minority_fraction must be in (0, 1]");
  if (cfg.decoy_prob < 0.0 || cfg.decoy_prob > 1.0)
    throw ConfigError("decoy_prob must be in [0, 1]");
  if (cfg.profile == SynthProfile::Attenuation) {
    if (cfg.n_relations < 2) throw ConfigError("attenuation profile needs two relations");
    if (cfg.distractor_distance < 1) throw ConfigError("distractor_distance must be positive");
    if (cfg.distractor_cues_min < 1 || cfg.distractor_cues_max < cfg.distractor_cues_min)
      throw ConfigError("bad distractor cue range");
  }
}

}  // namespace

SyntheticCorpus generate_synthetic(const SynthConfig& config, std::uint64_t seed) {
  validate_synth(config);

  SyntheticCorpus corpus;
  corpus.relation_names.push_back("NA");
  for (int r = 1; r <= config.n_relations; ++r)
    corpus.relation_names.push_back("r" + std::to_string(r));
  for (int r = 1; r <= config.n_relations; ++r)
    corpus.vocabulary_words.push_back("cue" + std::to_string(r));
  for (int e = 0; e < config.entity_pool; ++e)
    corpus.vocabulary_words.push_back("ent" + std::to_string(e));
  while (static_cast<int>(corpus.vocabulary_words.size()) < config.vocab_size)
    corpus.vocabulary_words.push_back(
        "w" + std::to_string(corpus.vocabulary_words.size()));

  TokenRanges tok;
  tok.n_relations = config.n_relations;
  tok.entity_pool = config.entity_pool;
  tok.filler_count = config.vocab_size - config.n_relations - config.entity_pool;

  Rng rng(seed);
  const int total = config.train_bags + config.test_bags;
  for (int b = 0; b < total; ++b) {
    const bool is_test = b >= config.train_bags;
    const std::string head_entity = "h" + std::to_string(b);
    const std::string tail_entity = "t" + std::to_string(b);
    const int relation =
        rng.bernoulli(config.na_fraction) ? 0 : 1 + rng.below_int(config.n_relations);
    const int bag_size =
        config.bag_size_min + rng.below_int(config.bag_size_max - config.bag_size_min + 1);

    // relevance profile: only a minority of sentences carry the cue
    std::vector<int> order(static_cast<std::size_t>(bag_size));
    std::iota(order.begin(), order.end(), 0);
    rng.shuffle(order);
    int cue_sentences = bag_size;
    if (config.profile == SynthProfile::Relevance && relation != 0)
      cue_sentences = std::max(
          1, static_cast<int>(std::lround(config.minority_fraction * bag_size)));
    std::vector<bool> carries_cue(static_cast<std::size_t>(bag_size), false);
    for (int i = 0; i < cue_sentences && i < bag_size; ++i)
      carries_cue[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])] = true;

    for (int si = 0; si < bag_size; ++si) {
      BuiltSentence s;
      switch (config.profile) {
        case SynthProfile::Separable:
          s = core_sentence(config, tok, relation, rng);
          break;
        case SynthProfile::Attenuation:
          s = attenuation_sentence(config, tok, relation, rng);
          break;
        case SynthProfile::Relevance: {
          int cue = 0;
          if (relation != 0 && carries_cue[static_cast<std::size_t>(si)]) {
            cue = relation;
          } else if (rng.bernoulli(config.decoy_prob)) {
            cue = 1 + rng.below_int(config.n_relations);
            while (relation != 0 && config.n_relations > 1 && cue == relation)
              cue = 1 + rng.below_int(config.n_relations);
          }
          s = core_sentence(config, tok, cue, rng);
          break;
        }
      }
      CorpusRecord rec;
      rec.head = s.head;
      rec.tail = s.tail;
      rec.head_entity = head_entity;
      rec.tail_entity = tail_entity;
      rec.relation = corpus.relation_names[static_cast<std::size_t>(relation)];
      rec.tokens.reserve(s.tokens.size());
      for (int id : s.tokens)
        rec.tokens.push_back(corpus.vocabulary_words[static_cast<std::size_t>(id)]);
      (is_test ? corpus.test_records : corpus.train_records).push_back(std::move(rec));
    }
  }
  return corpus;
}

Dataset synthetic_dataset(const SyntheticCorpus& corpus, bool test_split, BagMode mode,
                          int max_len) {
  return build_dataset(test_split ? corpus.test_records : corpus.train_records,
                       Vocabulary::from_words(corpus.vocabulary_words),
                       RelationCatalog::from_names(corpus.relation_names), max_len, mode,
                       "synthetic corpus");
}

}  // namespace relex
