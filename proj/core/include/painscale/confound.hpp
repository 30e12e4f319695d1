#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "painscale/eval.hpp"
#include "painscale/features.hpp"
#include "painscale/stats.hpp"
#include "painscale/types.hpp"

namespace painscale::confound {

enum class Kind : std::uint8_t { Categorical, Continuous };

/// One demographic/clinical variable to test against pain intensity and to
/// screen language features with. Categorical confounds map a participant
/// to one or more level labels (comorbid pathologies contribute to each of
/// theirs); continuous ones to a real value.
struct ConfoundSpec {
  std::string name;
  Kind kind = Kind::Categorical;
  std::function<std::vector<std::string>(const ParticipantRecord&)> levels;
  std::function<double(const ParticipantRecord&)> value;
};

/// The variables of the confound-on-intensity battery: age, gender,
/// education, professional activity, interviewer, pathology, years since
/// diagnosis/pain, ESR, CRP.
const std::vector<ConfoundSpec>& standard_confounds();

/// The screening variant: identical except pathology is expanded into four
/// binary indicator confounds (a single level set is ill-defined under
/// comorbidity).
const std::vector<ConfoundSpec>& screening_confounds();

std::optional<std::reference_wrapper<const ConfoundSpec>> find_screening_confound(
    std::string_view name);

struct IntensityTest {
  std::string confound;
  std::string test;  // "anova" or "chi2"
  stats::TestResult result;
};

struct IntensityReport {
  std::vector<IntensityTest> tests;
  std::vector<std::string> warnings;  // degenerate tables etc.
};

/// Continuous confounds get a one-way ANOVA grouped by pain class;
/// categorical ones a chi-square independence test on the confound x class
/// contingency table. Degenerate inputs produce warnings, not failures.
IntensityReport intensity_confound_report(const Corpus& corpus);

struct DroppedFeature {
  std::string name;
  double statistic = 0.0;  // ANOVA F or Pearson r
  double p_or_r = 0.0;     // p-value (categorical) or r (continuous)
};

struct ScreenResult {
  std::string confound;
  std::vector<DroppedFeature> dropped;
  std::vector<bool> retained_mask;  // aligned with the input matrix columns
  std::vector<std::string> warnings;

  std::set<std::string> dropped_names() const;
};

/// Drops a feature when it fails the independence screen against the
/// confound: ANOVA p < .05 across levels (categorical) or |Pearson r| > .7
/// (continuous). Zero-variance features are treated as uncorrelated and
/// retained; single-level confounds make the screen a warning no-op.
/// Pain-class labels are never consulted.
ScreenResult screen_features(const features::FeatureMatrix& m, const ConfoundSpec& confound,
                             const Corpus& corpus);

struct ScreenedComparison {
  ScreenResult screen;
  eval::EvalReport all_features;
  eval::EvalReport select_features;
  eval::EvalReport zrb;
  eval::SubgroupScores all_by_level;
  eval::SubgroupScores select_by_level;
  eval::SubgroupScores zrb_by_level;
};

/// Runs the paired evaluation behind the per-confound comparison table:
/// all features vs the post-screen subset (screen computed on the full
/// corpus before folding; a per-fold variant is available through
/// cfg.per_fold_blocklist via `per_fold_screening`), broken down by the
/// confound's levels plus the aggregate score.
ScreenedComparison screened_comparison(const Corpus& corpus, eval::FeatureSetId set,
                                       eval::ModelKind model, const ConfoundSpec& confound,
                                       const eval::EvalConfig& cfg, bool per_fold_screening = false,
                                       const std::shared_ptr<eval::FoldFeatureCache>& cache = nullptr);

/// Level labels per participant id for subgroup scoring.
std::map<std::string, std::vector<std::string>> levels_by_id(const Corpus& corpus,
                                                             const ConfoundSpec& confound);

/// The feature matrix screening operates on: the given feature set built
/// with all models fitted on the full corpus (labels unused).
features::FeatureMatrix global_feature_matrix(const Corpus& corpus, eval::FeatureSetId set,
                                              const eval::EvalConfig& cfg);

}  // namespace painscale::confound
