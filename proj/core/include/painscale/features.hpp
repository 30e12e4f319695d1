#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "painscale/matrix.hpp"
#include "painscale/stopwords.hpp"
#include "painscale/tfidf.hpp"
#include "painscale/topics.hpp"
#include "painscale/types.hpp"

namespace painscale::features {

/// The four base feature families.
enum class FeatureSet : std::uint8_t { Verbosity = 0, TfIdf, PosTfIdf, Topics };

std::string_view to_string(FeatureSet s);
std::optional<FeatureSet> feature_set_from_string(std::string_view s);

/// Named participant x feature matrix with per-column provenance.
struct FeatureMatrix {
  std::vector<std::string> feature_names;   // unique, one per column
  std::vector<FeatureSet> feature_set;      // per column
  Matrix values;                            // participants x features, finite
  std::vector<std::string> participant_ids;

  std::size_t n_features() const { return feature_names.size(); }
  std::size_t n_participants() const { return participant_ids.size(); }
  /// Column restriction keeping names/tags aligned.
  FeatureMatrix take_cols(std::span<const std::size_t> indices) const;

  bool operator==(const FeatureMatrix&) const = default;
};

struct Verbosity {
  double word_count = 0.0;
  double interview_length_s = 0.0;
  double word_rate = 0.0;  // words per minute; 0 with a warning when duration is 0
  bool zero_duration = false;
};

/// word count, total interview seconds, words per minute.
Verbosity verbosity_features(const ParticipantRecord& p);

inline constexpr const char* kVerbosityNames[3] = {"word_count", "interview_length_s", "word_rate"};

/// "lemma|POS" term counts with stop-lemma filtering (case-insensitive,
/// by lemma). The same lemma under two POS tags yields two distinct terms.
TermCounts build_terms(const ParticipantRecord& p, const StopwordSet& stopwords);

/// Per-record POS-tag counts keyed by the 13 wire codes.
TermCounts build_pos_counts(const ParticipantRecord& p);

// Whole-corpus builders (each fits on exactly the records given).
FeatureMatrix verbosity_matrix(std::span<const ParticipantRecord> records);
FeatureMatrix tfidf_matrix(const TfidfModel& model, const std::vector<TermCounts>& docs,
                           std::vector<std::string> participant_ids);

/// TF-IDF over the fixed 13-tag vocabulary; all 13 columns exist even when
/// a tag never occurs.
struct PosTfidfModel {
  std::array<int, kNumPosTags> doc_freq{};
  int n_docs = 0;
};
PosTfidfModel pos_tfidf_fit(const std::vector<TermCounts>& pos_docs);
FeatureMatrix pos_tfidf_matrix(const PosTfidfModel& model, const std::vector<TermCounts>& pos_docs,
                               std::vector<std::string> participant_ids);

FeatureMatrix topics_matrix(const TopicModel& model, const Matrix& tfidf_rows,
                            std::vector<std::string> participant_ids);

struct ZeroVarianceDrop {
  FeatureMatrix matrix;
  std::vector<std::string> dropped;
};

/// Removes columns whose values are constant within this matrix.
/// Throws "no informative features" when nothing would remain.
ZeroVarianceDrop drop_zero_variance(const FeatureMatrix& m);

/// Column indices of non-constant features over the given row subset.
/// This is the fold-safe form: the mask comes from training rows only.
std::vector<std::size_t> nonconstant_columns(const FeatureMatrix& m,
                                             std::span<const std::size_t> row_indices);

/// Column-wise concatenation. With more than one part, names are prefixed
/// by their set tag ("tfidf:dor|NOUN") to keep them globally unique; a
/// single part passes through unchanged. Participant order must agree.
FeatureMatrix early_fusion(const std::vector<FeatureMatrix>& parts);

/// Splits a (possibly set-prefixed) feature name into its set prefix and
/// payload, e.g. "tfidf:doer|VERB" -> {"tfidf", "doer|VERB"}.
std::pair<std::string, std::string> split_feature_name(const std::string& name);

}  // namespace painscale::features
