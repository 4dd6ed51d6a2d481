#include "relex/corpus.h"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "json.hpp"
#include "relex/errors.h"

namespace relex {

using nlohmann::json;

int Vocabulary::add(const std::string& word) {
  auto it = index_.find(word);
  if (it != index_.end()) return it->second;
  int id = static_cast<int>(words_.size());
  index_.emplace(word, id);
  words_.push_back(word);
  return id;
}

int Vocabulary::lookup(const std::string& word) const {
  auto it = index_.find(word);
  return it == index_.end() ? -1 : it->second;
}

Vocabulary Vocabulary::from_words(const std::vector<std::string>& words) {
  Vocabulary v;
  for (const auto& w : words) {
    if (v.lookup(w) >= 0) throw ConfigError("duplicate vocabulary word: " + w);
    v.add(w);
  }
  return v;
}

RelationCatalog RelationCatalog::from_names(const std::vector<std::string>& names) {
  if (names.empty() || names.front() != "NA")
    throw ConfigError("relation catalog must start with NA");
  RelationCatalog c;
  for (const auto& n : names) {
    if (c.index_.count(n)) throw ConfigError("duplicate relation name: " + n);
    c.index_.emplace(n, static_cast<int>(c.names_.size()));
    c.names_.push_back(n);
  }
  return c;
}

RelationCatalog RelationCatalog::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open relation catalog: " + path);
  std::vector<std::string> names;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    names.push_back(line);
  }
  return from_names(names);
}

void RelationCatalog::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write relation catalog: " + path);
  for (const auto& n : names_) out << n << '\n';
}

int RelationCatalog::lookup(const std::string& name) const {
  auto it = index_.find(name);
  return it == index_.end() ? -1 : it->second;
}

int Dataset::instance_count() const {
  int n = 0;
  for (const auto& b : bags) n += b.size();
  return n;
}

static CorpusRecord record_from_json(const json& j) {
  CorpusRecord rec;
  rec.tokens = j.at("tokens").get<std::vector<std::string>>();
  rec.head = j.at("head").get<int>();
  rec.tail = j.at("tail").get<int>();
  rec.head_entity = j.at("head_entity").get<std::string>();
  rec.tail_entity = j.at("tail_entity").get<std::string>();
  rec.relation = j.at("relation").get<std::string>();
  return rec;
}

std::string record_to_line(const CorpusRecord& rec) {
  json j;
  j["tokens"] = rec.tokens;
  j["head"] = rec.head;
  j["tail"] = rec.tail;
  j["head_entity"] = rec.head_entity;
  j["tail_entity"] = rec.tail_entity;
  j["relation"] = rec.relation;
  return j.dump();
}

std::vector<CorpusRecord> read_corpus_records(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open corpus: " + path);
  std::vector<CorpusRecord> records;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      records.push_back(record_from_json(json::parse(line)));
    } catch (const json::exception& e) {
      std::ostringstream msg;
      msg << path << ":" << line_no << ": malformed corpus record (" << e.what() << ")";
      throw std::runtime_error(msg.str());
    }
  }
  return records;
}

void write_corpus_records(const std::string& path, const std::vector<CorpusRecord>& records) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write corpus: " + path);
  for (const auto& rec : records) out << record_to_line(rec) << '\n';
  if (!out) throw std::runtime_error("write failed: " + path);
}

Vocabulary build_vocabulary(const std::vector<CorpusRecord>& records) {
  Vocabulary v;
  for (const auto& rec : records)
    for (const auto& tok : rec.tokens) v.add(tok);
  return v;
}

std::vector<Bag> group_into_bags(const std::vector<LabeledInstance>& instances, BagMode mode) {
  std::vector<Bag> bags;
  std::unordered_map<std::string, std::size_t> slot;  // key -> bag index, first appearance order
  for (const auto& li : instances) {
    std::string key = li.head_entity + '\x1f' + li.tail_entity;
    if (mode == BagMode::Train) key += '\x1f' + std::to_string(li.sentence.relation_id);
    auto it = slot.find(key);
    if (it == slot.end()) {
      it = slot.emplace(key, bags.size()).first;
      Bag bag;
      bag.head_entity = li.head_entity;
      bag.tail_entity = li.tail_entity;
      bags.push_back(std::move(bag));
    }
    Bag& bag = bags[it->second];
    bag.sentences.push_back(li.sentence);
    int label = li.sentence.relation_id;
    bool seen = false;
    for (int existing : bag.label_ids) seen = seen || existing == label;
    if (!seen) bag.label_ids.push_back(label);
  }
  for (auto& bag : bags) std::sort(bag.label_ids.begin(), bag.label_ids.end());
  return bags;
}

Dataset build_dataset(const std::vector<CorpusRecord>& records, Vocabulary vocabulary,
                      RelationCatalog relations, int max_len, BagMode mode,
                      const std::string& origin) {
  if (max_len < 2) throw ConfigError("max_len must be at least 2");

  Dataset ds;
  std::vector<LabeledInstance> instances;
  instances.reserve(records.size());
  for (const auto& rec : records) {
    int relation_id = relations.lookup(rec.relation);
    if (relation_id < 0)
      throw std::runtime_error(origin + ": unknown relation name: " + rec.relation);

    int k = static_cast<int>(rec.tokens.size());
    if (k < 1 || rec.head < 0 || rec.head >= k || rec.tail < 0 || rec.tail >= k ||
        rec.head == rec.tail) {
      ++ds.rejected_records;
      continue;
    }
    if (k > max_len) {
      // truncate only when both entity positions survive
      if (rec.head >= max_len || rec.tail >= max_len) {
        ++ds.rejected_records;
        continue;
      }
      k = max_len;
    }

    LabeledInstance li;
    li.head_entity = rec.head_entity;
    li.tail_entity = rec.tail_entity;
    li.sentence.head_pos = rec.head;
    li.sentence.tail_pos = rec.tail;
    li.sentence.relation_id = relation_id;
    li.sentence.token_ids.reserve(static_cast<std::size_t>(k));
    bool ok = true;
    for (int i = 0; i < k; ++i) {
      int id = vocabulary.lookup(rec.tokens[static_cast<std::size_t>(i)]);
      if (id < 0) {
        ok = false;  // unknown word under a frozen vocabulary
        break;
      }
      li.sentence.token_ids.push_back(id);
    }
    if (!ok) {
      ++ds.rejected_records;
      continue;
    }
    instances.push_back(std::move(li));
  }

  ds.bags = group_into_bags(instances, mode);
  ds.vocabulary = std::move(vocabulary);
  ds.relations = std::move(relations);
  return ds;
}

Dataset load_corpus(const std::string& path, Vocabulary vocabulary, RelationCatalog relations,
                    int max_len, BagMode mode) {
  return build_dataset(read_corpus_records(path), std::move(vocabulary), std::move(relations),
                       max_len, mode, path);
}

std::vector<CorpusRecord> to_records(const Dataset& dataset) {
  std::vector<CorpusRecord> records;
  for (const auto& bag : dataset.bags) {
    for (const auto& s : bag.sentences) {
      CorpusRecord rec;
      rec.head_entity = bag.head_entity;
      rec.tail_entity = bag.tail_entity;
      rec.head = s.head_pos;
      rec.tail = s.tail_pos;
      rec.relation = dataset.relations.name(s.relation_id);
      rec.tokens.reserve(s.token_ids.size());
      for (int id : s.token_ids) rec.tokens.push_back(dataset.vocabulary.word(id));
      records.push_back(std::move(rec));
    }
  }
  return records;
}

}  // namespace relex
