#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "painscale/features.hpp"
#include "painscale/matrix.hpp"
#include "painscale/types.hpp"

namespace painscale::eval {

enum class ModelKind : std::uint8_t { Zrb = 0, Dt, Svm };
enum class FeatureSetId : std::uint8_t {
  Verbosity = 0,
  TfIdf,
  PosTfIdf,
  Topics,
  EarlyFusion,
  LateFusion,
};

std::string_view to_string(ModelKind m);
std::string_view to_string(FeatureSetId s);
std::optional<ModelKind> model_kind_from_string(std::string_view s);
std::optional<FeatureSetId> feature_set_id_from_string(std::string_view s);
const std::vector<FeatureSetId>& all_feature_set_ids();
const std::vector<ModelKind>& all_model_kinds();

// ---------------------------------------------------------------------------
// Metrics
// ---------------------------------------------------------------------------

/// Support-weighted mean of per-class F1 scores. A class with no true and
/// no predicted members contributes F1 = 0 (it also has zero weight).
double weighted_f1(std::span<const PainClass> y_true, std::span<const PainClass> y_pred);

/// 3x3 row-normalized confusion matrix in canonical class order; rows with
/// zero support are all-zero.
Matrix confusion_matrix(std::span<const PainClass> y_true, std::span<const PainClass> y_pred);

// ---------------------------------------------------------------------------
// Feature selection
// ---------------------------------------------------------------------------

/// Columns ordered by per-feature ANOVA F across classes, descending; ties
/// by lower column index; constant columns rank last (F treated as 0).
std::vector<std::size_t> anova_rank(const Matrix& x, std::span<const PainClass> y);

/// Top-k of anova_rank, returned as ascending column indices.
std::vector<std::size_t> select_k_best(const Matrix& x, std::span<const PainClass> y, std::size_t k);

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

struct EvalConfig {
  std::vector<int> k_grid = default_k_grid();
  int inner_folds = 5;
  bool fit_features_globally = false;
  std::uint64_t seed = 0;
  int jobs = 1;
  int topic_count = features::kDefaultTopicCount;
  int topic_iters = features::kDefaultTopicIters;
  /// Stop-lemma list; null selects the bundled Portuguese default.
  const features::StopwordSet* stopwords = nullptr;
  /// Feature names removed before zero-variance filtering and selection
  /// (confound screening computed once on the full corpus).
  std::set<std::string> feature_blocklist;
  /// Per-fold screening hook: given the fold's feature matrix and its
  /// training rows, returns the names to drop for that fold.
  std::function<std::set<std::string>(const features::FeatureMatrix&, std::span<const std::size_t>)>
      per_fold_blocklist;

  static std::vector<int> default_k_grid();  // 2..20
  const features::StopwordSet& stopword_set() const;
};

struct BranchRecord {
  FeatureSetId set = FeatureSetId::Verbosity;
  int chosen_k = 0;
  std::vector<std::string> selected_features;
  PainClass prediction = PainClass::Mild;

  bool operator==(const BranchRecord&) const = default;
};

/// One leave-one-out fold. ZRB folds carry no branches; late fusion carries
/// one branch per base feature family.
struct FoldRecord {
  std::string held_out_id;
  PainClass predicted = PainClass::Mild;
  PainClass truth = PainClass::Mild;
  std::vector<BranchRecord> branches;

  int chosen_k() const;  // max over branches, 0 when there are none
  std::vector<std::string> selected_features() const;  // deduplicated union

  bool operator==(const FoldRecord&) const = default;
};

struct EvalReport {
  FeatureSetId feature_set = FeatureSetId::Verbosity;
  ModelKind model = ModelKind::Zrb;
  std::vector<FoldRecord> folds;
  double weighted_f1 = 0.0;
  Matrix confusion;
  std::vector<std::pair<std::string, int>> unique_selected;  // (name, fold count)
  std::string config_fingerprint;
};

/// Memoizes per-fold fitted feature matrices so several runs over the same
/// corpus/config (model grid, screening comparisons) share one NMF fit per
/// fold. Values are pure functions of (corpus, fold, config), so cache hits
/// are bit-identical to fresh builds.
class FoldFeatureCache;
std::shared_ptr<FoldFeatureCache> make_fold_feature_cache();

/// Leave-one-out validation: for each participant, every piece of fitted
/// state (TF-IDF vocabulary and idf, topic model, zero-variance mask,
/// ANOVA selection, classifier) is computed from the other n-1 records.
/// Scores are pooled over all n held-out predictions.
EvalReport loov_run(const Corpus& corpus, FeatureSetId set, ModelKind model, const EvalConfig& cfg,
                    const std::shared_ptr<FoldFeatureCache>& cache = nullptr);

/// One fold from training records + held-out record only. loov_run is
/// exactly this per fold with fold_seed = mix_seed(cfg.seed, fold_index),
/// which is what the no-leakage reproduction test exercises.
FoldRecord run_single_fold(std::span<const ParticipantRecord> train,
                           const ParticipantRecord& held_out, FeatureSetId set, ModelKind model,
                           const EvalConfig& cfg, std::uint64_t fold_seed);

/// Inner stratified cross-validation over the training partition; returns
/// the grid value maximizing mean inner weighted F1, ties to the smallest
/// k. Degrades to leave-one-out when a class has fewer than 2 members.
int choose_k(const Matrix& x_train, std::span<const PainClass> y_train, ModelKind model,
             const EvalConfig& cfg, std::uint64_t seed);

/// Plurality vote over per-feature-set predictions; ties break to the class
/// most prevalent in the fold's training labels, then canonical order.
PainClass late_fusion_vote(std::span<const PainClass> votes,
                           std::span<const PainClass> train_labels);

struct SubgroupScores {
  std::map<std::string, double> by_level;
  double aggregate = 0.0;
  std::vector<std::string> warnings;
};

/// Weighted F1 restricted to each level's members (participants may map to
/// several levels, e.g. comorbid pathologies; they count once in the
/// aggregate). Empty levels are omitted with a warning.
SubgroupScores subgroup_scores(const EvalReport& report,
                               const std::map<std::string, std::vector<std::string>>& levels_by_id);

std::string config_fingerprint(FeatureSetId set, ModelKind model, const EvalConfig& cfg);

}  // namespace painscale::eval
