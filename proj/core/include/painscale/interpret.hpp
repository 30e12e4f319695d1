#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "painscale/eval.hpp"
#include "painscale/features.hpp"
#include "painscale/types.hpp"

namespace painscale::interpret {

/// Bucket label for selected features that do not parse as "lemma|POS".
inline constexpr const char* kOtherBucket = "OTHER";

/// (word, mean weight) pairs ordered by weight descending, name ascending.
using RankedWords = std::vector<std::pair<std::string, double>>;

struct InterpretReport {
  std::vector<std::pair<std::string, int>> unique_selected;  // name, fold count
  std::map<std::string, double> pos_fraction;                // tag code or OTHER -> fraction
  // mean selected-feature weight per (class, tag code)
  std::map<PainClass, std::map<std::string, double>> class_pos_weight;
  std::map<std::string, RankedWords> top_words;  // tag code -> top-n words
  // mean weight per (class, tag code, word)
  std::map<PainClass, std::map<std::string, std::map<std::string, double>>> class_word_weight;
  std::vector<std::string> warnings;
};

/// Union of per-fold selected features with fold counts, ordered by
/// (count desc, name asc).
std::vector<std::pair<std::string, int>> aggregate_selected(const eval::EvalReport& report);

/// Relative POS-tag counts of the given feature names; unparseable names
/// fall into OTHER with a warning. Empty input gives an empty map.
std::map<std::string, double> pos_distribution(std::span<const std::string> feature_names,
                                               std::vector<std::string>* warnings = nullptr);

enum class GroupBy { Pos, Word };

/// Mean TF-IDF weight per pain class over the selected features of each
/// group. Pos mode averages over (class members x features in the tag);
/// Word mode keys by individual feature. Classes without members are
/// omitted. `features` must name columns of `m` (set prefixes tolerated).
std::map<PainClass, std::map<std::string, double>> class_mean_weights(
    const features::FeatureMatrix& m, std::span<const PainClass> y,
    std::span<const std::string> feature_names, GroupBy group_by);

/// Per POS tag, the n words with the highest corpus-wide mean TF-IDF weight
/// (ties by name). Tags with fewer than n words yield shorter lists.
std::map<std::string, RankedWords> top_words_per_pos(const features::FeatureMatrix& m,
                                                     std::span<const std::string> feature_names,
                                                     std::size_t n = 10);

/// Assembles the full interpretability bundle from an evaluation report and
/// the corpus-global TF-IDF matrix.
InterpretReport build_report(const eval::EvalReport& eval_report,
                             const features::FeatureMatrix& global_tfidf,
                             std::span<const PainClass> y, std::size_t top_n = 10);

}  // namespace painscale::interpret
