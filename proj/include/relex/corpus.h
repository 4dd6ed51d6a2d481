#pragma once

#include <string>
#include <unordered_map>
#include <vector>

namespace relex {

// A tokenized sentence with single-token entity mentions. Multi-token
// entity spans are expected to be collapsed by corpus preparation.
struct SentenceInstance {
  std::vector<int> token_ids;
  int head_pos = 0;
  int tail_pos = 0;
  int relation_id = 0;  // 0 = NA

  int length() const { return static_cast<int>(token_ids.size()); }
};

// All sentences that mention one entity pair. Training bags carry exactly
// one label; test bags carry the union of gold labels for the pair.
struct Bag {
  std::string head_entity;
  std::string tail_entity;
  std::vector<SentenceInstance> sentences;
  std::vector<int> label_ids;

  int size() const { return static_cast<int>(sentences.size()); }
};

class Vocabulary {
 public:
  // Returns the existing id or assigns the next free one.
  int add(const std::string& word);
  // -1 if the word is unknown.
  int lookup(const std::string& word) const;
  int size() const { return static_cast<int>(words_.size()); }
  const std::string& word(int id) const { return words_.at(static_cast<std::size_t>(id)); }
  const std::vector<std::string>& words() const { return words_; }

  static Vocabulary from_words(const std::vector<std::string>& words);

 private:
  std::unordered_map<std::string, int> index_;
  std::vector<std::string> words_;
};

// Dense relation name catalog; index 0 is always "NA".
class RelationCatalog {
 public:
  static RelationCatalog from_names(const std::vector<std::string>& names);
  static RelationCatalog load(const std::string& path);
  void save(const std::string& path) const;

  int lookup(const std::string& name) const;  // -1 if unknown
  int size() const { return static_cast<int>(names_.size()); }
  const std::string& name(int id) const { return names_.at(static_cast<std::size_t>(id)); }
  const std::vector<std::string>& names() const { return names_; }

 private:
  std::unordered_map<std::string, int> index_;
  std::vector<std::string> names_;
};

// One corpus line, before vocabulary mapping.
struct CorpusRecord {
  std::vector<std::string> tokens;
  int head = 0;
  int tail = 0;
  std::string head_entity;
  std::string tail_entity;
  std::string relation;
};

// A validated instance still attached to its entity-pair strings.
struct LabeledInstance {
  SentenceInstance sentence;
  std::string head_entity;
  std::string tail_entity;
};

enum class BagMode { Train, Test };

struct Dataset {
  std::vector<Bag> bags;
  Vocabulary vocabulary;
  RelationCatalog relations;
  int rejected_records = 0;

  int instance_count() const;
};

// Line-delimited record IO. Malformed lines raise errors naming the line
// number; structural record checks happen in load_corpus.
std::vector<CorpusRecord> read_corpus_records(const std::string& path);
void write_corpus_records(const std::string& path, const std::vector<CorpusRecord>& records);
std::string record_to_line(const CorpusRecord& rec);

// Vocabulary over all tokens, in order of first appearance.
Vocabulary build_vocabulary(const std::vector<CorpusRecord>& records);

// Train mode groups by (head entity, tail entity, relation); test mode by
// (head entity, tail entity) with the union of labels. Bag order follows
// first appearance.
std::vector<Bag> group_into_bags(const std::vector<LabeledInstance>& instances, BagMode mode);

// Validates records against the vocabulary and catalog, truncates to
// max_len when both entity positions survive, and groups into bags.
// Records failing semantic checks are dropped and counted; structural
// problems (unparseable line, unknown relation) raise errors naming
// `origin`.
Dataset build_dataset(const std::vector<CorpusRecord>& records, Vocabulary vocabulary,
                      RelationCatalog relations, int max_len, BagMode mode,
                      const std::string& origin = "corpus");

// read_corpus_records followed by build_dataset.
Dataset load_corpus(const std::string& path, Vocabulary vocabulary, RelationCatalog relations,
                    int max_len, BagMode mode);

// Inverse of loading, up to record order: one record per sentence.
std::vector<CorpusRecord> to_records(const Dataset& dataset);

}  // namespace relex
