#include "painscale/eval.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <mutex>
#include <thread>

#include <nlohmann/json.hpp>

#include "painscale/decision_tree.hpp"
#include "painscale/error.hpp"
#include "painscale/models.hpp"
#include "painscale/rng.hpp"
#include "painscale/svm.hpp"

namespace painscale::eval {

namespace {

constexpr std::uint64_t kTopicSalt = 0x70F1C5;
constexpr std::uint64_t kStratifySalt = 0x5F01D5;
constexpr std::uint64_t kChooseKSalt = 0xC400;
constexpr std::uint64_t kFitSalt = 0xF17;

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

std::string_view to_string(ModelKind m) {
  switch (m) {
    case ModelKind::Zrb: return "zrb";
    case ModelKind::Dt: return "dt";
    case ModelKind::Svm: return "svm";
  }
  return "zrb";
}

std::string_view to_string(FeatureSetId s) {
  switch (s) {
    case FeatureSetId::Verbosity: return "verbosity";
    case FeatureSetId::TfIdf: return "tfidf";
    case FeatureSetId::PosTfIdf: return "pos_tfidf";
    case FeatureSetId::Topics: return "topics";
    case FeatureSetId::EarlyFusion: return "early_fusion";
    case FeatureSetId::LateFusion: return "late_fusion";
  }
  return "verbosity";
}

std::optional<ModelKind> model_kind_from_string(std::string_view s) {
  if (s == "zrb") return ModelKind::Zrb;
  if (s == "dt") return ModelKind::Dt;
  if (s == "svm") return ModelKind::Svm;
  return std::nullopt;
}

std::optional<FeatureSetId> feature_set_id_from_string(std::string_view s) {
  if (s == "verbosity") return FeatureSetId::Verbosity;
  if (s == "tfidf") return FeatureSetId::TfIdf;
  if (s == "pos_tfidf") return FeatureSetId::PosTfIdf;
  if (s == "topics") return FeatureSetId::Topics;
  if (s == "early_fusion") return FeatureSetId::EarlyFusion;
  if (s == "late_fusion") return FeatureSetId::LateFusion;
  return std::nullopt;
}

const std::vector<FeatureSetId>& all_feature_set_ids() {
  static const std::vector<FeatureSetId> ids{FeatureSetId::Verbosity,   FeatureSetId::TfIdf,
                                             FeatureSetId::PosTfIdf,    FeatureSetId::Topics,
                                             FeatureSetId::EarlyFusion, FeatureSetId::LateFusion};
  return ids;
}

const std::vector<ModelKind>& all_model_kinds() {
  static const std::vector<ModelKind> kinds{ModelKind::Zrb, ModelKind::Dt, ModelKind::Svm};
  return kinds;
}

std::vector<int> EvalConfig::default_k_grid() {
  std::vector<int> grid;
  for (int k = 2; k <= 20; ++k) grid.push_back(k);
  return grid;
}

const features::StopwordSet& EvalConfig::stopword_set() const {
  return stopwords != nullptr ? *stopwords : features::StopwordSet::default_portuguese();
}

// ---------------------------------------------------------------------------
// Metrics
// ---------------------------------------------------------------------------

double weighted_f1(std::span<const PainClass> y_true, std::span<const PainClass> y_pred) {
  if (y_true.empty()) throw Error("weighted_f1: empty input");
  if (y_true.size() != y_pred.size()) throw Error("weighted_f1: length mismatch");

  double total = 0.0;
  for (std::size_t c = 0; c < kNumPainClasses; ++c) {
    std::size_t tp = 0, fp = 0, fn = 0;
    for (std::size_t i = 0; i < y_true.size(); ++i) {
      const bool is_true = static_cast<std::size_t>(y_true[i]) == c;
      const bool is_pred = static_cast<std::size_t>(y_pred[i]) == c;
      if (is_true && is_pred) ++tp;
      if (!is_true && is_pred) ++fp;
      if (is_true && !is_pred) ++fn;
    }
    const std::size_t support = tp + fn;
    if (support == 0) continue;
    const double precision = tp + fp == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fp);
    const double recall = static_cast<double>(tp) / static_cast<double>(support);
    const double f1 = precision + recall == 0.0 ? 0.0 : 2.0 * precision * recall / (precision + recall);
    total += static_cast<double>(support) * f1;
  }
  return total / static_cast<double>(y_true.size());
}

Matrix confusion_matrix(std::span<const PainClass> y_true, std::span<const PainClass> y_pred) {
  if (y_true.size() != y_pred.size()) throw Error("confusion_matrix: length mismatch");
  Matrix counts(kNumPainClasses, kNumPainClasses, 0.0);
  for (std::size_t i = 0; i < y_true.size(); ++i)
    counts(static_cast<std::size_t>(y_true[i]), static_cast<std::size_t>(y_pred[i])) += 1.0;
  for (std::size_t r = 0; r < kNumPainClasses; ++r) {
    double row_sum = 0.0;
    for (std::size_t c = 0; c < kNumPainClasses; ++c) row_sum += counts(r, c);
    if (row_sum > 0.0)
      for (std::size_t c = 0; c < kNumPainClasses; ++c) counts(r, c) /= row_sum;
  }
  return counts;
}

// ---------------------------------------------------------------------------
// Feature selection
// ---------------------------------------------------------------------------

namespace {

// Per-column ANOVA F across the classes present in y. Structural rules keep
// ranking total: a constant column scores 0, and a column constant within
// every class but split across them scores +inf.
double column_f_statistic(const Matrix& x, std::span<const PainClass> y, std::size_t col) {
  std::array<double, kNumPainClasses> sum{};
  std::array<double, kNumPainClasses> first{};
  std::array<bool, kNumPainClasses> constant{true, true, true};
  std::array<bool, kNumPainClasses> seen{};
  std::array<std::size_t, kNumPainClasses> count{};

  for (std::size_t i = 0; i < y.size(); ++i) {
    const auto c = static_cast<std::size_t>(y[i]);
    const double v = x(i, col);
    if (!seen[c]) {
      seen[c] = true;
      first[c] = v;
    } else if (v != first[c]) {
      constant[c] = false;
    }
    sum[c] += v;
    ++count[c];
  }

  std::size_t groups = 0, n = 0;
  for (std::size_t c = 0; c < kNumPainClasses; ++c)
    if (seen[c]) {
      ++groups;
      n += count[c];
    }
  if (groups < 2) return 0.0;

  bool all_within_constant = true;
  for (std::size_t c = 0; c < kNumPainClasses; ++c)
    if (seen[c] && !constant[c]) all_within_constant = false;
  if (all_within_constant) {
    double ref = 0.0;
    bool have_ref = false, all_same = true;
    for (std::size_t c = 0; c < kNumPainClasses; ++c) {
      if (!seen[c]) continue;
      if (!have_ref) {
        ref = first[c];
        have_ref = true;
      } else if (first[c] != ref) {
        all_same = false;
      }
    }
    return all_same ? 0.0 : kInf;
  }
  if (n <= groups) return 0.0;

  const double grand_mean = (sum[0] + sum[1] + sum[2]) / static_cast<double>(n);
  double ss_between = 0.0, ss_within = 0.0;
  std::array<double, kNumPainClasses> mean{};
  for (std::size_t c = 0; c < kNumPainClasses; ++c)
    if (seen[c]) mean[c] = sum[c] / static_cast<double>(count[c]);
  for (std::size_t i = 0; i < y.size(); ++i) {
    const auto c = static_cast<std::size_t>(y[i]);
    const double d = x(i, col) - mean[c];
    ss_within += d * d;
  }
  for (std::size_t c = 0; c < kNumPainClasses; ++c)
    if (seen[c]) ss_between += static_cast<double>(count[c]) * (mean[c] - grand_mean) * (mean[c] - grand_mean);

  ss_between = std::max(ss_between, 0.0);
  if (ss_within == 0.0) return ss_between == 0.0 ? 0.0 : kInf;
  const double df1 = static_cast<double>(groups - 1);
  const double df2 = static_cast<double>(n - groups);
  return (ss_between / df1) / (ss_within / df2);
}

}  // namespace

std::vector<std::size_t> anova_rank(const Matrix& x, std::span<const PainClass> y) {
  if (x.rows() != y.size()) throw Error("anova_rank: X/y size mismatch");
  std::vector<std::pair<double, std::size_t>> scored(x.cols());
  for (std::size_t j = 0; j < x.cols(); ++j) scored[j] = {column_f_statistic(x, y, j), j};
  std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  std::vector<std::size_t> order(x.cols());
  for (std::size_t j = 0; j < x.cols(); ++j) order[j] = scored[j].second;
  return order;
}

std::vector<std::size_t> select_k_best(const Matrix& x, std::span<const PainClass> y, std::size_t k) {
  if (k < 1) throw Error("select_k_best: k must be >= 1");
  if (k > x.cols()) throw Error("select_k_best: k exceeds column count");
  auto order = anova_rank(x, y);
  order.resize(k);
  std::sort(order.begin(), order.end());
  return order;
}

// ---------------------------------------------------------------------------
// Model dispatch
// ---------------------------------------------------------------------------

namespace {

std::vector<PainClass> fit_predict(ModelKind model, const Matrix& x_train,
                                   std::span<const PainClass> y_train, const Matrix& x_test,
                                   std::uint64_t seed) {
  switch (model) {
    case ModelKind::Zrb:
      return models::zrb_predict(models::zrb_fit(y_train), x_test.rows());
    case ModelKind::Dt: {
      const auto tree = models::dt_fit(x_train, y_train, seed);
      return models::dt_predict(tree, x_test);
    }
    case ModelKind::Svm: {
      models::SvmParams params;
      params.seed = seed;
      const auto svm = models::svm_fit(x_train, y_train, params);
      return models::svm_predict(svm, x_test);
    }
  }
  throw Error("fit_predict: unknown model kind");
}

}  // namespace

int choose_k(const Matrix& x_train, std::span<const PainClass> y_train, ModelKind model,
             const EvalConfig& cfg, std::uint64_t seed) {
  if (cfg.k_grid.empty()) throw Error("choose_k: empty k grid");
  std::vector<int> grid = cfg.k_grid;
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  if (grid.front() < 1) throw Error("choose_k: k grid values must be >= 1");
  if (grid.size() == 1) return grid.front();

  const std::size_t n = y_train.size();
  const auto counts = models::class_counts(y_train);
  std::size_t min_count = n;
  for (std::size_t c = 0; c < kNumPainClasses; ++c)
    if (counts[c] > 0) min_count = std::min(min_count, counts[c]);

  // Stratified inner folds; degrade to leave-one-out when stratification is
  // impossible (a class with fewer than 2 training members).
  std::size_t folds;
  std::vector<std::size_t> fold_of(n);
  if (min_count < 2) {
    folds = n;
    for (std::size_t i = 0; i < n; ++i) fold_of[i] = i;
  } else {
    folds = std::min<std::size_t>(static_cast<std::size_t>(std::max(cfg.inner_folds, 2)), min_count);
    Rng rng(mix_seed(seed, kStratifySalt));
    for (std::size_t c = 0; c < kNumPainClasses; ++c) {
      std::vector<std::size_t> members;
      for (std::size_t i = 0; i < n; ++i)
        if (static_cast<std::size_t>(y_train[i]) == c) members.push_back(i);
      rng.shuffle(members);
      for (std::size_t pos = 0; pos < members.size(); ++pos) fold_of[members[pos]] = pos % folds;
    }
  }

  std::vector<double> score_sum(grid.size(), 0.0);
  for (std::size_t f = 0; f < folds; ++f) {
    std::vector<std::size_t> tr, va;
    for (std::size_t i = 0; i < n; ++i) (fold_of[i] == f ? va : tr).push_back(i);
    if (va.empty() || tr.empty()) continue;

    std::vector<PainClass> y_tr, y_va;
    for (std::size_t i : tr) y_tr.push_back(y_train[i]);
    for (std::size_t i : va) y_va.push_back(y_train[i]);

    const Matrix x_tr = x_train.take_rows(tr);
    const Matrix x_va = x_train.take_rows(va);
    const auto order = anova_rank(x_tr, y_tr);

    for (std::size_t g = 0; g < grid.size(); ++g) {
      const std::size_t k_eff = std::min<std::size_t>(static_cast<std::size_t>(grid[g]), x_train.cols());
      if (k_eff == 0) continue;
      std::vector<std::size_t> sel(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k_eff));
      std::sort(sel.begin(), sel.end());
      double s = 0.0;
      try {
        const auto preds = fit_predict(model, x_tr.take_cols(sel), y_tr, x_va.take_cols(sel),
                                       mix_seed(seed, kFitSalt + f));
        s = weighted_f1(y_va, preds);
      } catch (const Error&) {
        // single-class or zero-variance inner slice: score this k as 0
        s = 0.0;
      }
      score_sum[g] += s;
    }
  }

  std::size_t best = 0;
  for (std::size_t g = 1; g < grid.size(); ++g)
    if (score_sum[g] > score_sum[best]) best = g;  // ties keep the smaller k
  return grid[best];
}

PainClass late_fusion_vote(std::span<const PainClass> votes,
                           std::span<const PainClass> train_labels) {
  if (votes.empty()) throw Error("late_fusion_vote: no votes");
  const auto vote_counts = models::class_counts(votes);
  const auto train_counts = models::class_counts(train_labels);
  std::size_t best = 0;
  for (std::size_t c = 1; c < kNumPainClasses; ++c) {
    if (vote_counts[c] > vote_counts[best] ||
        (vote_counts[c] == vote_counts[best] && train_counts[c] > train_counts[best]))
      best = c;
  }
  return static_cast<PainClass>(best);
}

// ---------------------------------------------------------------------------
// Fold pipeline
// ---------------------------------------------------------------------------

int FoldRecord::chosen_k() const {
  int k = 0;
  for (const auto& b : branches) k = std::max(k, b.chosen_k);
  return k;
}

std::vector<std::string> FoldRecord::selected_features() const {
  std::vector<std::string> out;
  std::set<std::string> seen;
  for (const auto& b : branches)
    for (const auto& name : b.selected_features)
      if (seen.insert(name).second) out.push_back(name);
  return out;
}

namespace {

using PartFn = std::function<std::shared_ptr<const features::FeatureMatrix>(features::FeatureSet)>;

struct DocViews {
  std::vector<features::TermCounts> term_docs;
  std::vector<features::TermCounts> pos_docs;
  std::vector<std::string> ids;
};

DocViews make_doc_views(std::span<const ParticipantRecord> records,
                        const features::StopwordSet& stopwords) {
  DocViews docs;
  docs.term_docs.reserve(records.size());
  docs.pos_docs.reserve(records.size());
  docs.ids.reserve(records.size());
  for (const auto& rec : records) {
    docs.term_docs.push_back(features::build_terms(rec, stopwords));
    docs.pos_docs.push_back(features::build_pos_counts(rec));
    docs.ids.push_back(rec.id);
  }
  return docs;
}

features::FeatureMatrix build_family(features::FeatureSet part,
                                     std::span<const ParticipantRecord> records,
                                     const DocViews& docs, std::span<const std::size_t> fit_rows,
                                     const EvalConfig& cfg, std::uint64_t topic_seed,
                                     const PartFn& dep) {
  switch (part) {
    case features::FeatureSet::Verbosity:
      return features::verbosity_matrix(records);
    case features::FeatureSet::TfIdf: {
      std::vector<features::TermCounts> fit_docs;
      fit_docs.reserve(fit_rows.size());
      for (std::size_t r : fit_rows) fit_docs.push_back(docs.term_docs[r]);
      const auto model = features::tfidf_fit(fit_docs);
      return features::tfidf_matrix(model, docs.term_docs, docs.ids);
    }
    case features::FeatureSet::PosTfIdf: {
      std::vector<features::TermCounts> fit_docs;
      fit_docs.reserve(fit_rows.size());
      for (std::size_t r : fit_rows) fit_docs.push_back(docs.pos_docs[r]);
      const auto model = features::pos_tfidf_fit(fit_docs);
      return features::pos_tfidf_matrix(model, docs.pos_docs, docs.ids);
    }
    case features::FeatureSet::Topics: {
      const auto tfidf_part = dep(features::FeatureSet::TfIdf);
      const Matrix x_fit = tfidf_part->values.take_rows(fit_rows);
      const auto model = features::topic_fit(x_fit, cfg.topic_count, cfg.topic_iters, topic_seed);
      return features::topics_matrix(model, tfidf_part->values, docs.ids);
    }
  }
  throw Error("build_family: unknown feature family");
}

BranchRecord run_branch(const features::FeatureMatrix& m, std::span<const std::size_t> train_rows,
                        std::size_t test_row, std::span<const PainClass> y_train,
                        FeatureSetId branch_set, ModelKind model, const EvalConfig& cfg,
                        std::uint64_t branch_seed) {
  std::set<std::string> blocked = cfg.feature_blocklist;
  if (cfg.per_fold_blocklist) {
    const auto extra = cfg.per_fold_blocklist(m, train_rows);
    blocked.insert(extra.begin(), extra.end());
  }

  std::vector<std::size_t> keep;
  for (std::size_t j : features::nonconstant_columns(m, train_rows))
    if (!blocked.count(m.feature_names[j])) keep.push_back(j);
  if (keep.empty())
    throw Error("no informative features after screening and variance filtering");

  const auto sub = m.take_cols(keep);
  const Matrix x_train = sub.values.take_rows(train_rows);
  const std::size_t test_idx[1] = {test_row};
  const Matrix x_test = sub.values.take_rows(test_idx);

  const int k = choose_k(x_train, y_train, model, cfg, mix_seed(branch_seed, kChooseKSalt));
  const std::size_t k_eff = std::min<std::size_t>(static_cast<std::size_t>(k), x_train.cols());
  const auto sel = select_k_best(x_train, y_train, k_eff);

  const auto preds = fit_predict(model, x_train.take_cols(sel), y_train, x_test.take_cols(sel),
                                 mix_seed(branch_seed, kFitSalt));

  BranchRecord branch;
  branch.set = branch_set;
  branch.chosen_k = k;
  branch.selected_features.reserve(sel.size());
  for (std::size_t j : sel) branch.selected_features.push_back(sub.feature_names[j]);
  branch.prediction = preds.front();
  return branch;
}

constexpr std::array<features::FeatureSet, 4> kBaseFamilies{
    features::FeatureSet::Verbosity, features::FeatureSet::TfIdf, features::FeatureSet::PosTfIdf,
    features::FeatureSet::Topics};

FeatureSetId branch_id_of(features::FeatureSet part) {
  switch (part) {
    case features::FeatureSet::Verbosity: return FeatureSetId::Verbosity;
    case features::FeatureSet::TfIdf: return FeatureSetId::TfIdf;
    case features::FeatureSet::PosTfIdf: return FeatureSetId::PosTfIdf;
    case features::FeatureSet::Topics: return FeatureSetId::Topics;
  }
  return FeatureSetId::Verbosity;
}

FoldRecord fold_pipeline(const PartFn& parts, std::span<const std::size_t> train_rows,
                         std::size_t test_row, std::span<const PainClass> y_train,
                         const std::string& held_id, PainClass truth, FeatureSetId set,
                         ModelKind model, const EvalConfig& cfg, std::uint64_t fold_seed) {
  FoldRecord fold;
  fold.held_out_id = held_id;
  fold.truth = truth;

  if (model == ModelKind::Zrb) {
    fold.predicted = models::zrb_fit(y_train).majority_class;
    return fold;
  }

  if (set == FeatureSetId::LateFusion) {
    std::vector<PainClass> votes;
    for (const auto part : kBaseFamilies) {
      const auto m = parts(part);
      const auto branch_set = branch_id_of(part);
      const auto branch_seed = mix_seed(fold_seed, static_cast<std::uint64_t>(branch_set) + 1);
      fold.branches.push_back(
          run_branch(*m, train_rows, test_row, y_train, branch_set, model, cfg, branch_seed));
      votes.push_back(fold.branches.back().prediction);
    }
    fold.predicted = late_fusion_vote(votes, y_train);
    return fold;
  }

  features::FeatureMatrix fused;
  const features::FeatureMatrix* matrix = nullptr;
  std::shared_ptr<const features::FeatureMatrix> single;
  if (set == FeatureSetId::EarlyFusion) {
    std::vector<features::FeatureMatrix> all;
    for (const auto part : kBaseFamilies) all.push_back(*parts(part));
    fused = features::early_fusion(all);
    matrix = &fused;
  } else {
    const auto part = [&] {
      switch (set) {
        case FeatureSetId::Verbosity: return features::FeatureSet::Verbosity;
        case FeatureSetId::TfIdf: return features::FeatureSet::TfIdf;
        case FeatureSetId::PosTfIdf: return features::FeatureSet::PosTfIdf;
        case FeatureSetId::Topics: return features::FeatureSet::Topics;
        default: throw Error("fold_pipeline: unexpected feature set");
      }
    }();
    single = parts(part);
    matrix = single.get();
  }

  const auto branch_seed = mix_seed(fold_seed, static_cast<std::uint64_t>(set) + 1);
  fold.branches.push_back(
      run_branch(*matrix, train_rows, test_row, y_train, set, model, cfg, branch_seed));
  fold.predicted = fold.branches.front().prediction;
  return fold;
}

}  // namespace

// ---------------------------------------------------------------------------
// Fold feature cache
// ---------------------------------------------------------------------------

class FoldFeatureCache {
 public:
  std::shared_ptr<const features::FeatureMatrix> get(
      std::size_t fold, features::FeatureSet part,
      const std::function<features::FeatureMatrix()>& build) {
    Slot* slot = nullptr;
    {
      std::lock_guard<std::mutex> g(map_mu_);
      auto& up = slots_[{fold, static_cast<int>(part)}];
      if (!up) up = std::make_unique<Slot>();
      slot = up.get();
    }
    std::lock_guard<std::mutex> g(slot->mu);
    if (!slot->value) slot->value = std::make_shared<const features::FeatureMatrix>(build());
    return slot->value;
  }

 private:
  struct Slot {
    std::mutex mu;
    std::shared_ptr<const features::FeatureMatrix> value;
  };
  std::mutex map_mu_;
  std::map<std::pair<std::size_t, int>, std::unique_ptr<Slot>> slots_;
};

std::shared_ptr<FoldFeatureCache> make_fold_feature_cache() {
  return std::make_shared<FoldFeatureCache>();
}

// ---------------------------------------------------------------------------
// Public fold / run entry points
// ---------------------------------------------------------------------------

FoldRecord run_single_fold(std::span<const ParticipantRecord> train,
                           const ParticipantRecord& held_out, FeatureSetId set, ModelKind model,
                           const EvalConfig& cfg, std::uint64_t fold_seed) {
  if (train.empty()) throw Error("run_single_fold: empty training partition");

  // Layout: training records first (given order), held-out record last.
  std::vector<ParticipantRecord> records(train.begin(), train.end());
  records.push_back(held_out);
  const DocViews docs = make_doc_views(records, cfg.stopword_set());

  std::vector<std::size_t> fit_rows(train.size());
  for (std::size_t i = 0; i < fit_rows.size(); ++i) fit_rows[i] = i;

  std::map<features::FeatureSet, std::shared_ptr<const features::FeatureMatrix>> built;
  PartFn parts = [&](features::FeatureSet part) -> std::shared_ptr<const features::FeatureMatrix> {
    auto it = built.find(part);
    if (it != built.end()) return it->second;
    auto value = std::make_shared<const features::FeatureMatrix>(
        build_family(part, records, docs, fit_rows, cfg, mix_seed(fold_seed, kTopicSalt), parts));
    built.emplace(part, value);
    return value;
  };

  std::vector<PainClass> y_train;
  y_train.reserve(train.size());
  for (const auto& rec : train) y_train.push_back(rec.pain_class);

  return fold_pipeline(parts, fit_rows, train.size(), y_train, held_out.id, held_out.pain_class,
                       set, model, cfg, fold_seed);
}

namespace {

std::vector<std::pair<std::string, int>> tally_selected(const std::vector<FoldRecord>& folds) {
  std::map<std::string, int> counts;
  for (const auto& fold : folds)
    for (const auto& name : fold.selected_features()) ++counts[name];
  std::vector<std::pair<std::string, int>> out(counts.begin(), counts.end());
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  return out;
}

}  // namespace

EvalReport loov_run(const Corpus& corpus, FeatureSetId set, ModelKind model, const EvalConfig& cfg,
                    const std::shared_ptr<FoldFeatureCache>& cache) {
  const auto& records = corpus.participants;
  const std::size_t n = records.size();
  if (n < 3) throw Error("loov_run: need at least 3 participants");
  const auto labels = corpus.labels();
  {
    const auto counts = models::class_counts(labels);
    std::size_t present = 0;
    for (std::size_t c : counts)
      if (c > 0) ++present;
    if (present < 2) throw Error("loov_run: need at least 2 classes");
  }

  const DocViews docs = make_doc_views(records, cfg.stopword_set());
  const auto shared_cache = cache ? cache : make_fold_feature_cache();

  // Global-fit mode: feature models are fitted once on all n records and
  // shared by every fold (the lax alternative kept behind a flag).
  std::map<features::FeatureSet, std::shared_ptr<const features::FeatureMatrix>> global_parts;
  std::mutex global_mu;
  std::function<std::shared_ptr<const features::FeatureMatrix>(features::FeatureSet)> global_get;
  if (cfg.fit_features_globally) {
    std::vector<std::size_t> all_rows(n);
    for (std::size_t i = 0; i < n; ++i) all_rows[i] = i;
    global_get = [&, all_rows](features::FeatureSet part) {
      std::lock_guard<std::mutex> g(global_mu);
      auto it = global_parts.find(part);
      if (it != global_parts.end()) return it->second;
      auto value = std::make_shared<const features::FeatureMatrix>(build_family(
          part, records, docs, all_rows, cfg, mix_seed(cfg.seed, kTopicSalt), global_get));
      global_parts.emplace(part, value);
      return value;
    };
  }

  std::vector<FoldRecord> folds(n);
  std::vector<std::exception_ptr> errors(n);

  const auto run_fold = [&](std::size_t i) {
    const std::uint64_t fold_seed = mix_seed(cfg.seed, i);
    if (cfg.fit_features_globally) {
      std::vector<std::size_t> train_rows;
      std::vector<PainClass> y_train;
      for (std::size_t r = 0; r < n; ++r)
        if (r != i) {
          train_rows.push_back(r);
          y_train.push_back(labels[r]);
        }
      folds[i] = fold_pipeline(global_get, train_rows, i, y_train, records[i].id, labels[i], set,
                               model, cfg, fold_seed);
      return;
    }

    // Strict fold layout: training records in corpus order minus i, the
    // held-out record last. lay(r) maps layout rows to corpus rows.
    const auto lay = [&](std::size_t r) { return r < i ? r : r + 1; };
    std::vector<std::size_t> fit_rows(n - 1);
    for (std::size_t r = 0; r + 1 < n; ++r) fit_rows[r] = r;
    std::vector<PainClass> y_train(n - 1);
    for (std::size_t r = 0; r + 1 < n; ++r) y_train[r] = labels[lay(r)];

    // Fold-local document views in layout order.
    DocViews fold_docs;
    fold_docs.term_docs.reserve(n);
    fold_docs.pos_docs.reserve(n);
    fold_docs.ids.reserve(n);
    for (std::size_t r = 0; r + 1 < n; ++r) {
      fold_docs.term_docs.push_back(docs.term_docs[lay(r)]);
      fold_docs.pos_docs.push_back(docs.pos_docs[lay(r)]);
      fold_docs.ids.push_back(docs.ids[lay(r)]);
    }
    fold_docs.term_docs.push_back(docs.term_docs[i]);
    fold_docs.pos_docs.push_back(docs.pos_docs[i]);
    fold_docs.ids.push_back(docs.ids[i]);

    std::vector<ParticipantRecord> layout_records;
    layout_records.reserve(n);
    for (std::size_t r = 0; r + 1 < n; ++r) layout_records.push_back(records[lay(r)]);
    layout_records.push_back(records[i]);

    std::function<std::shared_ptr<const features::FeatureMatrix>(features::FeatureSet)> parts =
        [&](features::FeatureSet part) {
          return shared_cache->get(i, part, [&] {
            return build_family(part, layout_records, fold_docs, fit_rows, cfg,
                                mix_seed(fold_seed, kTopicSalt), parts);
          });
        };

    folds[i] = fold_pipeline(parts, fit_rows, n - 1, y_train, records[i].id, labels[i], set, model,
                             cfg, fold_seed);
  };

  const int jobs = std::max(1, cfg.jobs);
  if (jobs == 1) {
    for (std::size_t i = 0; i < n; ++i) {
      try {
        run_fold(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> workers;
    const auto worker = [&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= n) return;
        try {
          run_fold(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    };
    for (int t = 0; t < jobs; ++t) workers.emplace_back(worker);
    for (auto& w : workers) w.join();
  }

  for (std::size_t i = 0; i < n; ++i) {
    if (errors[i]) {
      try {
        std::rethrow_exception(errors[i]);
      } catch (const std::exception& e) {
        throw Error("fold " + std::to_string(i) + " (" + records[i].id + "): " + e.what());
      }
    }
  }

  EvalReport report;
  report.feature_set = set;
  report.model = model;
  report.folds = std::move(folds);
  std::vector<PainClass> y_pred;
  y_pred.reserve(n);
  for (const auto& fold : report.folds) y_pred.push_back(fold.predicted);
  report.weighted_f1 = weighted_f1(labels, y_pred);
  report.confusion = confusion_matrix(labels, y_pred);
  report.unique_selected = tally_selected(report.folds);
  report.config_fingerprint = config_fingerprint(set, model, cfg);
  return report;
}

SubgroupScores subgroup_scores(const EvalReport& report,
                               const std::map<std::string, std::vector<std::string>>& levels_by_id) {
  SubgroupScores out;
  std::map<std::string, std::pair<std::vector<PainClass>, std::vector<PainClass>>> slices;
  std::vector<PainClass> agg_true, agg_pred;
  for (const auto& fold : report.folds) {
    const auto it = levels_by_id.find(fold.held_out_id);
    if (it == levels_by_id.end() || it->second.empty()) continue;
    agg_true.push_back(fold.truth);
    agg_pred.push_back(fold.predicted);
    for (const auto& level : it->second) {
      slices[level].first.push_back(fold.truth);
      slices[level].second.push_back(fold.predicted);
    }
  }
  if (agg_true.empty()) {
    out.warnings.push_back("no participants matched any level");
    return out;
  }
  for (const auto& [level, ys] : slices) out.by_level[level] = weighted_f1(ys.first, ys.second);
  // Levels declared but never seen are omitted; note them.
  std::set<std::string> declared;
  for (const auto& [id, levels] : levels_by_id)
    for (const auto& level : levels) declared.insert(level);
  for (const auto& level : declared)
    if (!out.by_level.count(level)) out.warnings.push_back("empty level omitted: " + level);
  out.aggregate = weighted_f1(agg_true, agg_pred);
  return out;
}

std::string config_fingerprint(FeatureSetId set, ModelKind model, const EvalConfig& cfg) {
  nlohmann::json j{
      {"feature_set", std::string(to_string(set))},
      {"model", std::string(to_string(model))},
      {"k_grid", cfg.k_grid},
      {"inner_folds", cfg.inner_folds},
      {"fit_features_globally", cfg.fit_features_globally},
      {"seed", cfg.seed},
      {"topic_count", cfg.topic_count},
      {"topic_iters", cfg.topic_iters},
      {"feature_blocklist", std::vector<std::string>(cfg.feature_blocklist.begin(),
                                                     cfg.feature_blocklist.end())},
      {"per_fold_blocklist", static_cast<bool>(cfg.per_fold_blocklist)},
  };
  const std::string canon = j.dump();
  std::uint64_t hash = 0xcbf29ce484222325ULL;  // FNV-1a 64
  for (unsigned char c : canon) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
  return std::string(buf);
}

}  // namespace painscale::eval
