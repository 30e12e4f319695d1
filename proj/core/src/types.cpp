#include "painscale/types.hpp"

#include <cmath>

#include "painscale/error.hpp"

namespace painscale {

std::string_view to_string(PainClass c) {
  switch (c) {
    case PainClass::Mild: return "mild";
    case PainClass::Moderate: return "moderate";
    case PainClass::Severe: return "severe";
  }
  return "mild";
}

std::optional<PainClass> pain_class_from_string(std::string_view s) {
  if (s == "mild") return PainClass::Mild;
  if (s == "moderate") return PainClass::Moderate;
  if (s == "severe") return PainClass::Severe;
  return std::nullopt;
}

PainClass discretize_vas(double vas) {
  if (!std::isfinite(vas) || vas < 0.0 || vas > 10.0)
    throw Error("discretize_vas: VAS value outside [0,10]");
  const int v = static_cast<int>(std::floor(vas + 0.5));  // half-up
  if (v <= 4) return PainClass::Mild;
  if (v <= 6) return PainClass::Moderate;
  return PainClass::Severe;
}

namespace {
constexpr std::array<std::string_view, kNumPosTags> kPosCodes{
    "NOUN", "VERB", "ADJ",  "DET",    "PRON",   "ART",   "ADV",
    "PREP", "CONJ", "NUM",  "INTERJ", "PPART",  "REL"};
}  // namespace

std::string_view to_string(PosTag t) { return kPosCodes[static_cast<std::size_t>(t)]; }

std::optional<PosTag> pos_tag_from_string(std::string_view s) {
  for (std::size_t i = 0; i < kNumPosTags; ++i)
    if (kPosCodes[i] == s) return static_cast<PosTag>(i);
  return std::nullopt;
}

const std::array<PosTag, kNumPosTags>& all_pos_tags() {
  static const std::array<PosTag, kNumPosTags> tags = [] {
    std::array<PosTag, kNumPosTags> t{};
    for (std::size_t i = 0; i < kNumPosTags; ++i) t[i] = static_cast<PosTag>(i);
    return t;
  }();
  return tags;
}

std::string_view to_string(Gender v) { return v == Gender::F ? "F" : "M"; }
std::string_view to_string(Education v) { return v == Education::Basic ? "Basic" : "HighSchool"; }
std::string_view to_string(Activity v) { return v == Activity::Active ? "Active" : "NotActive"; }

std::string_view to_string(Interviewer v) {
  switch (v) {
    case Interviewer::I1: return "I1";
    case Interviewer::I2: return "I2";
    case Interviewer::I3: return "I3";
  }
  return "I1";
}

std::string_view to_string(Pathology v) {
  switch (v) {
    case Pathology::RheumatoidArthritis: return "RheumatoidArthritis";
    case Pathology::Spondyloarthritis: return "Spondyloarthritis";
    case Pathology::Osteoarthritis: return "Osteoarthritis";
    case Pathology::PsoriaticArthritis: return "PsoriaticArthritis";
  }
  return "RheumatoidArthritis";
}

std::optional<Gender> gender_from_string(std::string_view s) {
  if (s == "F") return Gender::F;
  if (s == "M") return Gender::M;
  return std::nullopt;
}

std::optional<Education> education_from_string(std::string_view s) {
  if (s == "Basic") return Education::Basic;
  if (s == "HighSchool") return Education::HighSchool;
  return std::nullopt;
}

std::optional<Activity> activity_from_string(std::string_view s) {
  if (s == "Active") return Activity::Active;
  if (s == "NotActive") return Activity::NotActive;
  return std::nullopt;
}

std::optional<Interviewer> interviewer_from_string(std::string_view s) {
  if (s == "I1") return Interviewer::I1;
  if (s == "I2") return Interviewer::I2;
  if (s == "I3") return Interviewer::I3;
  return std::nullopt;
}

std::optional<Pathology> pathology_from_string(std::string_view s) {
  if (s == "RheumatoidArthritis") return Pathology::RheumatoidArthritis;
  if (s == "Spondyloarthritis") return Pathology::Spondyloarthritis;
  if (s == "Osteoarthritis") return Pathology::Osteoarthritis;
  if (s == "PsoriaticArthritis") return Pathology::PsoriaticArthritis;
  return std::nullopt;
}

const std::array<Pathology, 4>& all_pathologies() {
  static const std::array<Pathology, 4> p{
      Pathology::RheumatoidArthritis, Pathology::Spondyloarthritis,
      Pathology::Osteoarthritis, Pathology::PsoriaticArthritis};
  return p;
}

bool ParticipantRecord::is_complete() const {
  std::array<bool, kNumInterviewQuestions> seen{};
  for (const auto& seg : segments) {
    if (seg.question_id >= 1 && seg.question_id <= kNumInterviewQuestions)
      seen[static_cast<std::size_t>(seg.question_id - 1)] = true;
  }
  for (bool b : seen)
    if (!b) return false;
  return true;
}

std::vector<PainClass> Corpus::labels() const {
  std::vector<PainClass> y;
  y.reserve(participants.size());
  for (const auto& p : participants) y.push_back(p.pain_class);
  return y;
}

std::vector<std::string> Corpus::ids() const {
  std::vector<std::string> out;
  out.reserve(participants.size());
  for (const auto& p : participants) out.push_back(p.id);
  return out;
}

}  // namespace painscale
