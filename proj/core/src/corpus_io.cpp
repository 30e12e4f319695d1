#include "painscale/corpus_io.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "painscale/error.hpp"

namespace painscale::io {

using nlohmann::json;

namespace {

// Parse failure for one record; carries the reject reason.
struct RecordError {
  std::string reason;
};

double require_number(const json& obj, const char* key) {
  if (!obj.contains(key) || obj.at(key).is_null())
    throw RecordError{std::string("missing field ") + key};
  const json& v = obj.at(key);
  if (!v.is_number()) throw RecordError{std::string("invalid field ") + key};
  return v.get<double>();
}

std::string require_string(const json& obj, const char* key) {
  if (!obj.contains(key) || obj.at(key).is_null())
    throw RecordError{std::string("missing field ") + key};
  const json& v = obj.at(key);
  if (!v.is_string()) throw RecordError{std::string("invalid field ") + key};
  return v.get<std::string>();
}

const json& require_object(const json& obj, const char* key) {
  if (!obj.contains(key) || obj.at(key).is_null())
    throw RecordError{std::string("missing field ") + key};
  const json& v = obj.at(key);
  if (!v.is_object()) throw RecordError{std::string("invalid field ") + key};
  return v;
}

const json& require_array(const json& obj, const char* key) {
  if (!obj.contains(key) || obj.at(key).is_null())
    throw RecordError{std::string("missing field ") + key};
  const json& v = obj.at(key);
  if (!v.is_array()) throw RecordError{std::string("invalid field ") + key};
  return v;
}

bool has_whitespace(const std::string& s) {
  for (unsigned char c : s)
    if (std::isspace(c)) return true;
  return false;
}

ParticipantRecord record_from_json(const json& j) {
  ParticipantRecord rec;
  rec.id = require_string(j, "id");
  if (rec.id.empty()) throw RecordError{"invalid field id"};

  const json& demo = require_object(j, "demographics");
  rec.demographics.age = require_number(demo, "age");
  if (!(rec.demographics.age > 0.0)) throw RecordError{"invalid field age"};
  {
    const auto g = gender_from_string(require_string(demo, "gender"));
    if (!g) throw RecordError{"invalid field gender"};
    rec.demographics.gender = *g;
    const auto e = education_from_string(require_string(demo, "education"));
    if (!e) throw RecordError{"invalid field education"};
    rec.demographics.education = *e;
    const auto a = activity_from_string(require_string(demo, "professionally_active"));
    if (!a) throw RecordError{"invalid field professionally_active"};
    rec.demographics.professionally_active = *a;
  }

  const json& clin = require_object(j, "clinical");
  for (const json& p : require_array(clin, "pathologies")) {
    if (!p.is_string()) throw RecordError{"invalid field pathologies"};
    const auto parsed = pathology_from_string(p.get<std::string>());
    if (!parsed) throw RecordError{"unknown pathology '" + p.get<std::string>() + "'"};
    rec.clinical.pathologies.insert(*parsed);
  }
  if (rec.clinical.pathologies.empty()) throw RecordError{"empty pathologies"};
  rec.clinical.years_since_diagnosis = require_number(clin, "years_since_diagnosis");
  rec.clinical.years_since_pain = require_number(clin, "years_since_pain");
  rec.clinical.esr = require_number(clin, "esr");
  rec.clinical.crp = require_number(clin, "crp");
  if (rec.clinical.years_since_diagnosis < 0.0) throw RecordError{"invalid field years_since_diagnosis"};
  if (rec.clinical.years_since_pain < 0.0) throw RecordError{"invalid field years_since_pain"};
  if (rec.clinical.esr < 0.0) throw RecordError{"invalid field esr"};
  if (rec.clinical.crp < 0.0) throw RecordError{"invalid field crp"};

  const auto interviewer = interviewer_from_string(require_string(j, "interviewer"));
  if (!interviewer) throw RecordError{"invalid field interviewer"};
  rec.interviewer = *interviewer;

  rec.vas_pain = require_number(j, "vas_pain");
  rec.vas_disease = require_number(j, "vas_disease");
  if (!(rec.vas_pain >= 0.0 && rec.vas_pain <= 10.0)) throw RecordError{"invalid field vas_pain"};
  if (!(rec.vas_disease >= 0.0 && rec.vas_disease <= 10.0)) throw RecordError{"invalid field vas_disease"};

  for (const json& s : require_array(j, "segments")) {
    if (!s.is_object()) throw RecordError{"invalid field segments"};
    Segment seg;
    const double qid = require_number(s, "question_id");
    seg.question_id = static_cast<int>(qid);
    if (seg.question_id != qid || seg.question_id < 1 || seg.question_id > kNumInterviewQuestions)
      throw RecordError{"invalid field question_id"};
    seg.duration_s = require_number(s, "duration_s");
    if (seg.duration_s < 0.0) throw RecordError{"invalid field duration_s"};
    for (const json& t : require_array(s, "tokens")) {
      if (!t.is_object()) throw RecordError{"invalid field tokens"};
      Token tok;
      tok.surface = require_string(t, "surface");
      tok.lemma = require_string(t, "lemma");
      if (tok.lemma.empty() || has_whitespace(tok.lemma)) throw RecordError{"invalid field lemma"};
      const auto pos = pos_tag_from_string(require_string(t, "pos"));
      if (!pos) throw RecordError{"unknown pos tag '" + t.at("pos").get<std::string>() + "'"};
      tok.pos = *pos;
      seg.tokens.push_back(std::move(tok));
    }
    rec.segments.push_back(std::move(seg));
  }

  rec.pain_class = discretize_vas(rec.vas_pain);
  return rec;
}

json record_to_json(const ParticipantRecord& rec) {
  json segments = json::array();
  for (const auto& seg : rec.segments) {
    json toks = json::array();
    for (const auto& t : seg.tokens)
      toks.push_back({{"surface", t.surface}, {"lemma", t.lemma}, {"pos", std::string(to_string(t.pos))}});
    segments.push_back({{"question_id", seg.question_id},
                        {"duration_s", seg.duration_s},
                        {"tokens", std::move(toks)}});
  }

  json pathologies = json::array();
  for (const auto p : rec.clinical.pathologies) pathologies.push_back(std::string(to_string(p)));

  return json{
      {"id", rec.id},
      {"demographics",
       {{"age", rec.demographics.age},
        {"gender", std::string(to_string(rec.demographics.gender))},
        {"education", std::string(to_string(rec.demographics.education))},
        {"professionally_active", std::string(to_string(rec.demographics.professionally_active))}}},
      {"clinical",
       {{"pathologies", std::move(pathologies)},
        {"years_since_diagnosis", rec.clinical.years_since_diagnosis},
        {"years_since_pain", rec.clinical.years_since_pain},
        {"esr", rec.clinical.esr},
        {"crp", rec.clinical.crp}}},
      {"interviewer", std::string(to_string(rec.interviewer))},
      {"vas_pain", rec.vas_pain},
      {"vas_disease", rec.vas_disease},
      {"segments", std::move(segments)},
  };
}

bool is_blank(const std::string& line) {
  for (unsigned char c : line)
    if (!std::isspace(c)) return false;
  return true;
}

}  // namespace

Corpus parse_corpus(std::istream& in) {
  Corpus corpus;
  std::unordered_set<std::string> seen_ids;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_blank(line)) continue;
    std::string fallback_id = "line " + std::to_string(line_no);
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
      corpus.ingest_rejects.push_back({fallback_id, "invalid json"});
      continue;
    }
    if (j.contains("id") && j.at("id").is_string()) fallback_id = j.at("id").get<std::string>();
    try {
      ParticipantRecord rec = record_from_json(j);
      if (!seen_ids.insert(rec.id).second) {
        corpus.ingest_rejects.push_back({rec.id, "duplicate id"});
        continue;
      }
      corpus.participants.push_back(std::move(rec));
    } catch (const RecordError& e) {
      corpus.ingest_rejects.push_back({fallback_id, e.reason});
    }
  }
  if (corpus.participants.empty()) throw Error("empty corpus: no valid records");
  return corpus;
}

Corpus parse_corpus(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read corpus file: " + path.string());
  return parse_corpus(in);
}

Corpus complete_case_filter(const Corpus& corpus) {
  Corpus out;
  out.ingest_rejects = corpus.ingest_rejects;
  for (const auto& rec : corpus.participants) {
    if (rec.is_complete())
      out.participants.push_back(rec);
    else
      out.ingest_rejects.push_back({rec.id, "incomplete"});
  }
  return out;
}

std::string serialize_record(const ParticipantRecord& record) {
  return record_to_json(record).dump();
}

void serialize_corpus(const Corpus& corpus, std::ostream& out) {
  for (const auto& rec : corpus.participants) out << serialize_record(rec) << '\n';
}

void write_corpus(const Corpus& corpus, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write corpus file: " + path.string());
  serialize_corpus(corpus, out);
}

}  // namespace painscale::io
