#include <algorithm>
#include <string>
#include <vector>

#include "doctest.h"
#include "relex/corpus.h"
#include "relex/errors.h"
#include "relex/synth.h"
#include "test_util.h"

using namespace relex;

namespace {

CorpusRecord make_record(std::vector<std::string> tokens, int head, int tail,
                         const std::string& head_entity, const std::string& tail_entity,
                         const std::string& relation) {
  CorpusRecord rec;
  rec.tokens = std::move(tokens);
  rec.head = head;
  rec.tail = tail;
  rec.head_entity = head_entity;
  rec.tail_entity = tail_entity;
  rec.relation = relation;
  return rec;
}

Vocabulary vocab_over(const std::vector<CorpusRecord>& records) {
  return build_vocabulary(records);
}

RelationCatalog catalog3() { return RelationCatalog::from_names({"NA", "born_in", "works_at"}); }

LabeledInstance instance_of(const std::string& head_entity, const std::string& tail_entity,
                            int relation, int length = 4) {
  LabeledInstance li;
  li.head_entity = head_entity;
  li.tail_entity = tail_entity;
  li.sentence = testutil::make_sentence(std::vector<int>(static_cast<std::size_t>(length), 0), 0,
                                        1, relation);
  return li;
}

}  // namespace

TEST_CASE("well-formed record becomes a k=7 instance") {
  std::vector<CorpusRecord> records = {make_record(
      {"Obama", "was", "born", "in", "the", "United", "States"}, 0, 5, "Obama",
      "United_States", "born_in")};
  Dataset ds = build_dataset(records, vocab_over(records), catalog3(), 100, BagMode::Train);
  REQUIRE(ds.bags.size() == 1);
  REQUIRE(ds.bags[0].sentences.size() == 1);
  const SentenceInstance& s = ds.bags[0].sentences[0];
  CHECK(s.length() == 7);
  CHECK(s.head_pos == 0);
  CHECK(s.tail_pos == 5);
  CHECK(s.relation_id == 1);
  CHECK(ds.rejected_records == 0);
}

TEST_CASE("coinciding entity positions reject the record") {
  std::vector<CorpusRecord> records = {
      make_record({"a", "b", "c", "d"}, 2, 2, "A", "B", "born_in")};
  Dataset ds = build_dataset(records, vocab_over(records), catalog3(), 100, BagMode::Train);
  CHECK(ds.rejected_records == 1);
  CHECK(ds.bags.empty());
}

TEST_CASE("out-of-range entity positions reject the record") {
  std::vector<CorpusRecord> records = {
      make_record({"a", "b", "c"}, 0, 3, "A", "B", "born_in"),
      make_record({"a", "b", "c"}, -1, 1, "A", "B", "born_in")};
  Dataset ds = build_dataset(records, vocab_over(records), catalog3(), 100, BagMode::Train);
  CHECK(ds.rejected_records == 2);
}

TEST_CASE("four records over two pairs group into two bags") {
  std::vector<CorpusRecord> records = {
      make_record({"a", "b", "c"}, 0, 1, "P1", "Q1", "born_in"),
      make_record({"d", "e", "f"}, 1, 2, "P2", "Q2", "born_in"),
      make_record({"a", "c", "b"}, 0, 2, "P1", "Q1", "born_in"),
      make_record({"f", "e", "d"}, 2, 0, "P2", "Q2", "born_in")};
  Dataset ds = build_dataset(records, vocab_over(records), catalog3(), 100, BagMode::Train);
  REQUIRE(ds.bags.size() == 2);
  CHECK(ds.bags[0].size() == 2);
  CHECK(ds.bags[1].size() == 2);
  CHECK(ds.instance_count() == 4);
}

TEST_CASE("single instance gives a singleton bag") {
  std::vector<Bag> bags = group_into_bags({instance_of("A", "B", 1)}, BagMode::Train);
  REQUIRE(bags.size() == 1);
  CHECK(bags[0].size() == 1);
  CHECK(bags[0].label_ids == std::vector<int>{1});
}

TEST_CASE("six instances of one pair form one six-sentence bag") {
  std::vector<LabeledInstance> instances;
  for (int i = 0; i < 6; ++i) instances.push_back(instance_of("A", "B", 1));
  std::vector<Bag> bags = group_into_bags(instances, BagMode::Train);
  REQUIRE(bags.size() == 1);
  CHECK(bags[0].size() == 6);
}

TEST_CASE("train mode splits one pair with two labels into two bags") {
  std::vector<LabeledInstance> instances;
  for (int i = 0; i < 3; ++i) instances.push_back(instance_of("P", "Q", 1));
  for (int i = 0; i < 2; ++i) instances.push_back(instance_of("P", "Q", 2));
  std::vector<Bag> bags = group_into_bags(instances, BagMode::Train);
  REQUIRE(bags.size() == 2);
  CHECK(bags[0].size() == 3);
  CHECK(bags[0].label_ids == std::vector<int>{1});
  CHECK(bags[1].size() == 2);
  CHECK(bags[1].label_ids == std::vector<int>{2});
}

TEST_CASE("test mode keeps one pair together with the label union") {
  std::vector<LabeledInstance> instances;
  for (int i = 0; i < 3; ++i) instances.push_back(instance_of("P", "Q", 2));
  for (int i = 0; i < 2; ++i) instances.push_back(instance_of("P", "Q", 1));
  std::vector<Bag> bags = group_into_bags(instances, BagMode::Test);
  REQUIRE(bags.size() == 1);
  CHECK(bags[0].size() == 5);
  CHECK(bags[0].label_ids == std::vector<int>{1, 2});  // sorted union
}

TEST_CASE("grouping partitions the instances") {
  SynthConfig cfg;
  cfg.train_bags = 40;
  cfg.vocab_size = 60;
  cfg.bag_size_min = 1;
  cfg.bag_size_max = 5;
  SyntheticCorpus corpus = generate_synthetic(cfg, 97);
  Dataset ds = synthetic_dataset(corpus, false, BagMode::Train, cfg.max_len);
  CHECK(ds.rejected_records == 0);
  CHECK(ds.instance_count() == static_cast<int>(corpus.train_records.size()));
}

TEST_CASE("truncation keeps records whose entities survive and rejects the rest") {
  std::vector<CorpusRecord> records = {
      make_record({"a", "b", "c", "d", "e", "f"}, 0, 2, "A", "B", "born_in"),
      make_record({"a", "b", "c", "d", "e", "f"}, 0, 5, "C", "D", "born_in")};
  Dataset ds = build_dataset(records, vocab_over(records), catalog3(), 4, BagMode::Train);
  REQUIRE(ds.bags.size() == 1);
  CHECK(ds.bags[0].sentences[0].length() == 4);  // truncated to max_len
  CHECK(ds.rejected_records == 1);               // tail position out of the window
}

TEST_CASE("unknown words under a frozen vocabulary reject the record") {
  std::vector<CorpusRecord> records = {
      make_record({"known", "also_known", "mystery"}, 0, 1, "A", "B", "born_in")};
  Vocabulary vocab = Vocabulary::from_words({"known", "also_known"});
  Dataset ds = build_dataset(records, vocab, catalog3(), 100, BagMode::Train);
  CHECK(ds.rejected_records == 1);
  CHECK(ds.bags.empty());
}

TEST_CASE("unknown relation names raise an error naming the origin") {
  std::vector<CorpusRecord> records = {
      make_record({"a", "b", "c"}, 0, 1, "A", "B", "no_such_relation")};
  CHECK_THROWS_WITH_AS(
      build_dataset(records, vocab_over(records), catalog3(), 100, BagMode::Train, "input.jsonl"),
      "input.jsonl: unknown relation name: no_such_relation", std::runtime_error);
}

TEST_CASE("malformed corpus lines raise an error naming the line number") {
  const auto dir = testutil::scratch_dir("relex_test_corpus_io");
  const std::string path = (dir / "bad.jsonl").string();
  testutil::write_file(path,
                       record_to_line(make_record({"a", "b"}, 0, 1, "A", "B", "NA")) +
                           "\nnot json at all\n");
  try {
    read_corpus_records(path);
    FAIL("expected a parse error");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()).find(path + ":2") != std::string::npos);
  }
}

TEST_CASE("missing corpus file raises an error naming the path") {
  CHECK_THROWS_WITH_AS(read_corpus_records("/no/such/file.jsonl"),
                       "cannot open corpus: /no/such/file.jsonl", std::runtime_error);
}

TEST_CASE("record IO round-trips the semantic content") {
  const auto dir = testutil::scratch_dir("relex_test_corpus_roundtrip");
  const std::string path = (dir / "corpus.jsonl").string();
  std::vector<CorpusRecord> records = {
      make_record({"x", "y", "z", "x"}, 1, 3, "A", "B", "born_in"),
      make_record({"y", "z", "q"}, 2, 0, "A", "B", "works_at"),
      make_record({"q", "x", "y"}, 0, 2, "C", "D", "NA")};
  write_corpus_records(path, records);

  Dataset ds = load_corpus(path, vocab_over(records), catalog3(), 100, BagMode::Train);
  CHECK(ds.rejected_records == 0);
  std::vector<CorpusRecord> back = to_records(ds);
  REQUIRE(back.size() == records.size());
  // bag grouping may reorder records; compare as serialized line sets
  std::vector<std::string> expect, got;
  for (const auto& r : records) expect.push_back(record_to_line(r));
  for (const auto& r : back) got.push_back(record_to_line(r));
  std::sort(expect.begin(), expect.end());
  std::sort(got.begin(), got.end());
  CHECK(expect == got);
}

TEST_CASE("vocabulary assigns ids in first-appearance order") {
  std::vector<CorpusRecord> records = {make_record({"b", "a", "b"}, 0, 1, "A", "B", "NA"),
                                       make_record({"c", "a"}, 0, 1, "A", "B", "NA")};
  Vocabulary v = build_vocabulary(records);
  CHECK(v.size() == 3);
  CHECK(v.lookup("b") == 0);
  CHECK(v.lookup("a") == 1);
  CHECK(v.lookup("c") == 2);
  CHECK(v.lookup("nope") == -1);
}

TEST_CASE("relation catalogs demand NA first and reject duplicates") {
  CHECK_THROWS_AS(RelationCatalog::from_names({"born_in", "NA"}), ConfigError);
  CHECK_THROWS_AS(RelationCatalog::from_names({}), ConfigError);
  CHECK_THROWS_AS(RelationCatalog::from_names({"NA", "r", "r"}), ConfigError);
  RelationCatalog c = catalog3();
  CHECK(c.lookup("NA") == 0);
  CHECK(c.lookup("works_at") == 2);
  CHECK(c.lookup("absent") == -1);
}

TEST_CASE("relation catalog file IO round-trips") {
  const auto dir = testutil::scratch_dir("relex_test_catalog");
  const std::string path = (dir / "relations.txt").string();
  catalog3().save(path);
  RelationCatalog loaded = RelationCatalog::load(path);
  CHECK(loaded.names() == catalog3().names());
}
