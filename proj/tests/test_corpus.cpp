#include <doctest.h>

#include <sstream>

#include "painscale/corpus_io.hpp"
#include "painscale/error.hpp"
#include "painscale/synth.hpp"
#include "painscale/types.hpp"
#include "test_helpers.hpp"

using namespace painscale;

TEST_SUITE_BEGIN("corpus");

TEST_CASE("discretize_vas bins and rounding") {
  CHECK(discretize_vas(3.0) == PainClass::Mild);
  CHECK(discretize_vas(5.0) == PainClass::Moderate);
  CHECK(discretize_vas(6.7) == PainClass::Severe);  // rounds half-up to 7
  CHECK(discretize_vas(0.0) == PainClass::Mild);
  CHECK(discretize_vas(4.49) == PainClass::Mild);
  CHECK(discretize_vas(4.5) == PainClass::Moderate);  // half-up
  CHECK(discretize_vas(6.49) == PainClass::Moderate);
  CHECK(discretize_vas(6.5) == PainClass::Severe);
  CHECK(discretize_vas(10.0) == PainClass::Severe);
  CHECK_THROWS_AS(discretize_vas(-0.1), Error);
  CHECK_THROWS_AS(discretize_vas(10.1), Error);
  CHECK_THROWS_AS(discretize_vas(std::nan("")), Error);
}

TEST_CASE("discretize_vas is total, monotone, surjective on [0,10]") {
  PainClass prev = PainClass::Mild;
  std::array<bool, 3> seen{};
  for (int i = 0; i <= 1000; ++i) {
    const double vas = i * 0.01;
    const PainClass c = discretize_vas(vas);
    CHECK(static_cast<int>(c) >= static_cast<int>(prev));
    seen[static_cast<std::size_t>(c)] = true;
    prev = c;
  }
  CHECK(seen[0]);
  CHECK(seen[1]);
  CHECK(seen[2]);
}

TEST_CASE("pos tag wire codes form a closed 13-tag set") {
  CHECK(kNumPosTags == 13);
  for (PosTag t : all_pos_tags()) CHECK(pos_tag_from_string(to_string(t)) == t);
  CHECK(!pos_tag_from_string("XYZ"));
  CHECK(!pos_tag_from_string("noun"));
}

TEST_CASE("parse: one well-formed record round-trips") {
  const auto rec = testutil::make_record("p1", 3.0, {{"dor", PosTag::Noun}});
  std::stringstream ss(io::serialize_record(rec) + "\n");
  const Corpus corpus = io::parse_corpus(ss);
  REQUIRE(corpus.participants.size() == 1);
  CHECK(corpus.ingest_rejects.empty());
  CHECK(corpus.participants[0] == rec);
}

TEST_CASE("parse: missing vas_pain is rejected with a reason") {
  const auto rec = testutil::make_record("p7", 3.0, {{"dor", PosTag::Noun}});
  auto j = nlohmann::json::parse(io::serialize_record(rec));
  j.erase("vas_pain");
  std::stringstream ss(j.dump() + "\n" +
                       io::serialize_record(testutil::make_record("ok", 2.0, {{"a", PosTag::Verb}})));
  const Corpus corpus = io::parse_corpus(ss);
  REQUIRE(corpus.ingest_rejects.size() == 1);
  CHECK(corpus.ingest_rejects[0].id == "p7");
  CHECK(corpus.ingest_rejects[0].reason == "missing field vas_pain");
}

TEST_CASE("parse: bad values are rejected record-by-record, never silently") {
  const auto good = testutil::make_record("good", 5.0, {{"a", PosTag::Verb}});
  auto bad_pos = io::serialize_record(testutil::make_record("badpos", 5.0, {{"a", PosTag::Verb}}));
  bad_pos.replace(bad_pos.find("\"VERB\""), 6, "\"WORD\"");
  std::stringstream ss(io::serialize_record(good) + "\n" + "{not json}\n" + bad_pos + "\n");
  const Corpus corpus = io::parse_corpus(ss);
  CHECK(corpus.participants.size() == 1);
  REQUIRE(corpus.ingest_rejects.size() == 2);
  CHECK(corpus.ingest_rejects[0].id == "line 2");
  CHECK(corpus.ingest_rejects[0].reason == "invalid json");
  CHECK(corpus.ingest_rejects[1].id == "badpos");
  CHECK(corpus.ingest_rejects[1].reason == "unknown pos tag 'WORD'");
}

TEST_CASE("parse: duplicate ids and empty corpus") {
  const auto rec = testutil::make_record("dup", 3.0, {{"a", PosTag::Noun}});
  std::stringstream ss(io::serialize_record(rec) + "\n" + io::serialize_record(rec) + "\n");
  const Corpus corpus = io::parse_corpus(ss);
  CHECK(corpus.participants.size() == 1);
  REQUIRE(corpus.ingest_rejects.size() == 1);
  CHECK(corpus.ingest_rejects[0].reason == "duplicate id");

  std::stringstream empty("{\"id\":1}\n");
  CHECK_THROWS_WITH_AS(io::parse_corpus(empty), "empty corpus: no valid records", Error);
  CHECK_THROWS_AS(io::parse_corpus(std::filesystem::path("/nonexistent/corpus.jsonl")), Error);
}

TEST_CASE("complete_case_filter drops records missing a question") {
  auto complete = testutil::make_record("c1", 2.0, {{"a", PosTag::Noun}});
  auto incomplete = testutil::make_record("i1", 2.0, {{"a", PosTag::Noun}});
  incomplete.segments.pop_back();  // question 7 gone

  Corpus corpus;
  corpus.participants = {complete, incomplete};
  const Corpus filtered = io::complete_case_filter(corpus);
  REQUIRE(filtered.participants.size() == 1);
  CHECK(filtered.participants[0].id == "c1");
  REQUIRE(filtered.ingest_rejects.size() == 1);
  CHECK(filtered.ingest_rejects[0].id == "i1");
  CHECK(filtered.ingest_rejects[0].reason == "incomplete");

  SUBCASE("all complete is the identity") {
    Corpus all_ok;
    all_ok.participants = {complete};
    const Corpus same = io::complete_case_filter(all_ok);
    CHECK(same.participants == all_ok.participants);
    CHECK(same.ingest_rejects.empty());
  }
}

TEST_CASE("filter: 3 complete / 2 incomplete mixed file") {
  Corpus corpus;
  for (int i = 0; i < 3; ++i)
    corpus.participants.push_back(
        testutil::make_record("c" + std::to_string(i), 2.0, {{"a", PosTag::Noun}}));
  for (int i = 0; i < 2; ++i) {
    auto rec = testutil::make_record("i" + std::to_string(i), 2.0, {{"a", PosTag::Noun}});
    rec.segments.erase(rec.segments.begin() + i);  // remove question i+1
    corpus.participants.push_back(rec);
  }
  const Corpus filtered = io::complete_case_filter(corpus);
  CHECK(filtered.participants.size() == 3);
  CHECK(filtered.ingest_rejects.size() == 2);
}

TEST_CASE("ingest accounting: 94 records -> 65 participants") {
  // 94 raw records: 9 with a missing metadata field (parse rejects), 20
  // missing an interview question (filter drops), 65 full.
  std::ostringstream file;
  int made = 0;
  for (int i = 0; i < 65; ++i)
    file << io::serialize_record(
                testutil::make_record("full" + std::to_string(made++), 3.0, {{"a", PosTag::Noun}}))
         << '\n';
  for (int i = 0; i < 20; ++i) {
    auto rec = testutil::make_record("noq" + std::to_string(made++), 3.0, {{"a", PosTag::Noun}});
    rec.segments.erase(rec.segments.begin());
    file << io::serialize_record(rec) << '\n';
  }
  for (int i = 0; i < 9; ++i) {
    auto line = io::serialize_record(
        testutil::make_record("nometa" + std::to_string(made++), 3.0, {{"a", PosTag::Noun}}));
    const auto pos = line.find("\"esr\"");
    const auto end = line.find(',', pos);
    line.erase(pos, end - pos + 1);
    file << line << '\n';
  }
  std::stringstream ss(file.str());
  const Corpus parsed = io::parse_corpus(ss);
  CHECK(parsed.participants.size() == 85);
  CHECK(parsed.ingest_rejects.size() == 9);
  const Corpus filtered = io::complete_case_filter(parsed);
  CHECK(filtered.participants.size() == 65);
  // |participants| + incompleteness-attributable rejects == input records
  CHECK(filtered.participants.size() + filtered.ingest_rejects.size() == 94);
}

TEST_CASE("round-trip property: parse(serialize(corpus)) == corpus") {
  for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
    synth::SynthConfig cfg;
    cfg.n_participants = 12;
    cfg.seed = seed;
    const auto generated = synth::generate(cfg);
    std::stringstream ss;
    io::serialize_corpus(generated.corpus, ss);
    const Corpus reparsed = io::parse_corpus(ss);
    CHECK(reparsed.participants == generated.corpus.participants);
    CHECK(reparsed.ingest_rejects.empty());
  }
}

TEST_SUITE_END();
