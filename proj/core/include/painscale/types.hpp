#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace painscale {

// ---------------------------------------------------------------------------
// Target label
// ---------------------------------------------------------------------------

/// Pain intensity class, discretized from the 0-10 VAS self-report.
/// Canonical order Mild < Moderate < Severe; all tie-breaking in the
/// pipeline uses this order so runs are reproducible.
enum class PainClass : std::uint8_t { Mild = 0, Moderate = 1, Severe = 2 };

inline constexpr std::array<PainClass, 3> kPainClasses{
    PainClass::Mild, PainClass::Moderate, PainClass::Severe};
inline constexpr std::size_t kNumPainClasses = 3;

std::string_view to_string(PainClass c);
std::optional<PainClass> pain_class_from_string(std::string_view s);

/// Rounds the VAS mark half-up to the nearest integer and bins it:
/// <=4 Mild (0 folded into Mild), 5-6 Moderate, >=7 Severe.
/// Throws Error when vas is outside [0, 10] or not finite.
PainClass discretize_vas(double vas);

// ---------------------------------------------------------------------------
// Annotated speech
// ---------------------------------------------------------------------------

/// The 13-tag part-of-speech set the annotated transcripts arrive with.
enum class PosTag : std::uint8_t {
  Noun = 0,
  Verb,
  Adjective,
  Determinant,
  Pronoun,
  Article,
  Adverb,
  Preposition,
  Conjunction,
  Numeral,
  Interjection,
  PastParticiple,
  Relation,
};

inline constexpr std::size_t kNumPosTags = 13;

/// Wire code, e.g. "NOUN", "PPART".
std::string_view to_string(PosTag t);
std::optional<PosTag> pos_tag_from_string(std::string_view s);
const std::array<PosTag, kNumPosTags>& all_pos_tags();

struct Token {
  std::string surface;
  std::string lemma;  // non-empty, lowercase, no whitespace (multiword lemmas use '_')
  PosTag pos = PosTag::Noun;

  bool operator==(const Token&) const = default;
};

constexpr int kNumInterviewQuestions = 7;

struct Segment {
  int question_id = 0;  // 1..7
  double duration_s = 0.0;
  std::vector<Token> tokens;

  bool operator==(const Segment&) const = default;
};

// ---------------------------------------------------------------------------
// Demographic / clinical metadata
// ---------------------------------------------------------------------------

enum class Gender : std::uint8_t { F, M };
enum class Education : std::uint8_t { Basic, HighSchool };
enum class Activity : std::uint8_t { Active, NotActive };
enum class Interviewer : std::uint8_t { I1, I2, I3 };
enum class Pathology : std::uint8_t {
  RheumatoidArthritis,
  Spondyloarthritis,
  Osteoarthritis,
  PsoriaticArthritis,
};

std::string_view to_string(Gender v);
std::string_view to_string(Education v);
std::string_view to_string(Activity v);
std::string_view to_string(Interviewer v);
std::string_view to_string(Pathology v);
std::optional<Gender> gender_from_string(std::string_view s);
std::optional<Education> education_from_string(std::string_view s);
std::optional<Activity> activity_from_string(std::string_view s);
std::optional<Interviewer> interviewer_from_string(std::string_view s);
std::optional<Pathology> pathology_from_string(std::string_view s);
const std::array<Pathology, 4>& all_pathologies();

struct Demographics {
  double age = 0.0;  // years, > 0
  Gender gender = Gender::F;
  Education education = Education::Basic;
  Activity professionally_active = Activity::Active;

  bool operator==(const Demographics&) const = default;
};

struct Clinical {
  std::set<Pathology> pathologies;  // non-empty; comorbidity allowed
  double years_since_diagnosis = 0.0;
  double years_since_pain = 0.0;
  double esr = 0.0;  // mm/h
  double crp = 0.0;  // mg/L

  bool operator==(const Clinical&) const = default;
};

// ---------------------------------------------------------------------------
// Participant and corpus
// ---------------------------------------------------------------------------

struct ParticipantRecord {
  std::string id;
  Demographics demographics;
  Clinical clinical;
  Interviewer interviewer = Interviewer::I1;
  double vas_pain = 0.0;     // [0, 10]
  double vas_disease = 0.0;  // [0, 10]
  std::vector<Segment> segments;
  PainClass pain_class = PainClass::Mild;  // always discretize_vas(vas_pain)

  /// True when every interview question 1..7 has at least one segment.
  bool is_complete() const;

  bool operator==(const ParticipantRecord&) const = default;
};

struct IngestReject {
  std::string id;  // participant id when parseable, otherwise "line <n>"
  std::string reason;

  bool operator==(const IngestReject&) const = default;
};

/// Participants in file order (downstream folds iterate in this order),
/// plus the per-record reasons for anything that was rejected on the way.
struct Corpus {
  std::vector<ParticipantRecord> participants;
  std::vector<IngestReject> ingest_rejects;

  std::vector<PainClass> labels() const;
  std::vector<std::string> ids() const;
};

}  // namespace painscale
