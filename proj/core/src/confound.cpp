#include "painscale/confound.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "painscale/error.hpp"
#include "painscale/rng.hpp"

namespace painscale::confound {

namespace {

constexpr double kAnovaDropP = 0.05;
constexpr double kPearsonDropR = 0.7;

ConfoundSpec continuous(std::string name, std::function<double(const ParticipantRecord&)> fn) {
  ConfoundSpec spec;
  spec.name = std::move(name);
  spec.kind = Kind::Continuous;
  spec.value = std::move(fn);
  return spec;
}

ConfoundSpec categorical(std::string name,
                         std::function<std::vector<std::string>(const ParticipantRecord&)> fn) {
  ConfoundSpec spec;
  spec.name = std::move(name);
  spec.kind = Kind::Categorical;
  spec.levels = std::move(fn);
  return spec;
}

std::vector<ConfoundSpec> base_confounds() {
  std::vector<ConfoundSpec> out;
  out.push_back(continuous("age", [](const ParticipantRecord& p) { return p.demographics.age; }));
  out.push_back(categorical("gender", [](const ParticipantRecord& p) {
    return std::vector<std::string>{std::string(to_string(p.demographics.gender))};
  }));
  out.push_back(categorical("education", [](const ParticipantRecord& p) {
    return std::vector<std::string>{std::string(to_string(p.demographics.education))};
  }));
  out.push_back(categorical("professionally_active", [](const ParticipantRecord& p) {
    return std::vector<std::string>{std::string(to_string(p.demographics.professionally_active))};
  }));
  out.push_back(categorical("interviewer", [](const ParticipantRecord& p) {
    return std::vector<std::string>{std::string(to_string(p.interviewer))};
  }));
  out.push_back(continuous("years_since_diagnosis",
                           [](const ParticipantRecord& p) { return p.clinical.years_since_diagnosis; }));
  out.push_back(continuous("years_since_pain",
                           [](const ParticipantRecord& p) { return p.clinical.years_since_pain; }));
  out.push_back(continuous("esr", [](const ParticipantRecord& p) { return p.clinical.esr; }));
  out.push_back(continuous("crp", [](const ParticipantRecord& p) { return p.clinical.crp; }));
  return out;
}

}  // namespace

const std::vector<ConfoundSpec>& standard_confounds() {
  static const std::vector<ConfoundSpec> specs = [] {
    auto out = base_confounds();
    // multi-level pathology; comorbid participants contribute one count per
    // pathology
    out.insert(out.begin() + 5, categorical("pathology", [](const ParticipantRecord& p) {
                 std::vector<std::string> levels;
                 for (const auto path : p.clinical.pathologies)
                   levels.emplace_back(to_string(path));
                 return levels;
               }));
    return out;
  }();
  return specs;
}

const std::vector<ConfoundSpec>& screening_confounds() {
  static const std::vector<ConfoundSpec> specs = [] {
    auto out = base_confounds();
    std::size_t at = 5;
    for (const auto path : all_pathologies()) {
      std::string name = "pathology:";
      name += to_string(path);
      out.insert(out.begin() + static_cast<std::ptrdiff_t>(at++),
                 categorical(name, [path](const ParticipantRecord& p) {
                   return std::vector<std::string>{p.clinical.pathologies.count(path) ? "yes" : "no"};
                 }));
    }
    return out;
  }();
  return specs;
}

std::optional<std::reference_wrapper<const ConfoundSpec>> find_screening_confound(
    std::string_view name) {
  for (const auto& spec : screening_confounds())
    if (spec.name == name) return std::cref(spec);
  return std::nullopt;
}

IntensityReport intensity_confound_report(const Corpus& corpus) {
  IntensityReport report;
  std::array<std::size_t, kNumPainClasses> class_count{};
  for (const auto& p : corpus.participants) ++class_count[static_cast<std::size_t>(p.pain_class)];
  std::size_t present = 0;
  for (std::size_t c : class_count)
    if (c > 0) ++present;
  if (present < 2) throw Error("intensity_confound_report: need at least 2 pain classes");

  for (const auto& spec : standard_confounds()) {
    if (spec.kind == Kind::Continuous) {
      std::vector<std::vector<double>> groups;
      for (std::size_t c = 0; c < kNumPainClasses; ++c) {
        if (class_count[c] == 0) continue;
        std::vector<double> g;
        for (const auto& p : corpus.participants)
          if (static_cast<std::size_t>(p.pain_class) == c) g.push_back(spec.value(p));
        groups.push_back(std::move(g));
      }
      try {
        report.tests.push_back({spec.name, "anova", stats::one_way_anova(groups)});
      } catch (const Error& e) {
        report.warnings.push_back(spec.name + ": " + e.what());
      }
      continue;
    }

    // contingency: level x pain class
    std::map<std::string, std::array<long long, kNumPainClasses>> rows;
    for (const auto& p : corpus.participants)
      for (const auto& level : spec.levels(p))
        ++rows[level][static_cast<std::size_t>(p.pain_class)];
    std::vector<std::vector<long long>> table;
    for (const auto& [level, counts] : rows) {
      std::vector<long long> row;
      for (std::size_t c = 0; c < kNumPainClasses; ++c)
        if (class_count[c] > 0) row.push_back(counts[c]);
      table.push_back(std::move(row));
    }
    if (table.size() < 2) {
      report.warnings.push_back(spec.name + ": degenerate (single level), chi-square skipped");
      continue;
    }
    try {
      report.tests.push_back({spec.name, "chi2", stats::chi_square_independence(table)});
    } catch (const Error& e) {
      report.warnings.push_back(spec.name + ": " + e.what());
    }
  }
  return report;
}

std::set<std::string> ScreenResult::dropped_names() const {
  std::set<std::string> out;
  for (const auto& d : dropped) out.insert(d.name);
  return out;
}

ScreenResult screen_features(const features::FeatureMatrix& m, const ConfoundSpec& confound,
                             const Corpus& corpus) {
  if (m.n_participants() != corpus.participants.size())
    throw Error("screen_features: matrix/corpus size mismatch");
  ScreenResult result;
  result.confound = confound.name;
  result.retained_mask.assign(m.n_features(), true);

  const std::size_t n = m.n_participants();

  if (confound.kind == Kind::Categorical) {
    // Participants with multiple levels (comorbidity) are not meaningful in
    // a one-way layout; such confounds are screened via binary indicators,
    // so a multi-level participant here is a spec misuse.
    std::vector<std::string> level_of(n);
    std::map<std::string, std::vector<std::size_t>> members;
    for (std::size_t i = 0; i < n; ++i) {
      const auto levels = confound.levels(corpus.participants[i]);
      if (levels.size() != 1)
        throw Error("screen_features: confound '" + confound.name +
                    "' must map each participant to exactly one level");
      level_of[i] = levels.front();
      members[levels.front()].push_back(i);
    }
    if (members.size() < 2) {
      result.warnings.push_back(confound.name + ": single level, screen is a no-op");
      return result;
    }
    for (std::size_t j = 0; j < m.n_features(); ++j) {
      std::vector<std::vector<double>> groups;
      for (const auto& [level, idx] : members) {
        std::vector<double> g;
        g.reserve(idx.size());
        for (std::size_t i : idx) g.push_back(m.values(i, j));
        groups.push_back(std::move(g));
      }
      const auto test = stats::one_way_anova(groups);
      // constant feature: F = 0, p = 1 -> retained (removed elsewhere)
      if (test.p < kAnovaDropP) {
        result.retained_mask[j] = false;
        result.dropped.push_back({m.feature_names[j], test.statistic, test.p});
      }
    }
    return result;
  }

  std::vector<double> values(n);
  for (std::size_t i = 0; i < n; ++i) values[i] = confound.value(corpus.participants[i]);
  bool confound_constant = true;
  for (double v : values)
    if (v != values.front()) confound_constant = false;
  if (confound_constant) {
    result.warnings.push_back(confound.name + ": constant confound, screen is a no-op");
    return result;
  }
  for (std::size_t j = 0; j < m.n_features(); ++j) {
    const auto col = m.values.col(j);
    bool feature_constant = true;
    for (double v : col)
      if (v != col.front()) feature_constant = false;
    if (feature_constant) continue;  // uncorrelated by convention
    const double r = stats::pearson_r(col, values);
    if (std::fabs(r) > kPearsonDropR) {
      result.retained_mask[j] = false;
      result.dropped.push_back({m.feature_names[j], r, r});
    }
  }
  return result;
}

features::FeatureMatrix global_feature_matrix(const Corpus& corpus, eval::FeatureSetId set,
                                              const eval::EvalConfig& cfg) {
  const auto& records = corpus.participants;
  const auto& stopwords = cfg.stopword_set();

  std::vector<features::TermCounts> term_docs, pos_docs;
  for (const auto& rec : records) {
    term_docs.push_back(features::build_terms(rec, stopwords));
    pos_docs.push_back(features::build_pos_counts(rec));
  }
  auto ids = corpus.ids();

  const auto build = [&](features::FeatureSet part) -> features::FeatureMatrix {
    switch (part) {
      case features::FeatureSet::Verbosity:
        return features::verbosity_matrix(records);
      case features::FeatureSet::TfIdf:
        return features::tfidf_matrix(features::tfidf_fit(term_docs), term_docs, ids);
      case features::FeatureSet::PosTfIdf:
        return features::pos_tfidf_matrix(features::pos_tfidf_fit(pos_docs), pos_docs, ids);
      case features::FeatureSet::Topics: {
        const auto tfidf =
            features::tfidf_matrix(features::tfidf_fit(term_docs), term_docs, ids);
        const auto model = features::topic_fit(tfidf.values, cfg.topic_count, cfg.topic_iters,
                                               mix_seed(cfg.seed, 0x70F1C5));
        return features::topics_matrix(model, tfidf.values, ids);
      }
    }
    throw Error("global_feature_matrix: unknown feature family");
  };

  switch (set) {
    case eval::FeatureSetId::Verbosity:
      return build(features::FeatureSet::Verbosity);
    case eval::FeatureSetId::TfIdf:
      return build(features::FeatureSet::TfIdf);
    case eval::FeatureSetId::PosTfIdf:
      return build(features::FeatureSet::PosTfIdf);
    case eval::FeatureSetId::Topics:
      return build(features::FeatureSet::Topics);
    case eval::FeatureSetId::EarlyFusion:
    case eval::FeatureSetId::LateFusion: {
      std::vector<features::FeatureMatrix> parts;
      parts.push_back(build(features::FeatureSet::Verbosity));
      parts.push_back(build(features::FeatureSet::TfIdf));
      parts.push_back(build(features::FeatureSet::PosTfIdf));
      parts.push_back(build(features::FeatureSet::Topics));
      return features::early_fusion(parts);
    }
  }
  throw Error("global_feature_matrix: unknown feature set");
}

std::map<std::string, std::vector<std::string>> levels_by_id(const Corpus& corpus,
                                                             const ConfoundSpec& confound) {
  std::map<std::string, std::vector<std::string>> out;
  for (const auto& p : corpus.participants) {
    if (confound.kind == Kind::Categorical)
      out[p.id] = confound.levels(p);
    else
      out[p.id] = {confound.name};  // continuous confounds have no levels; one bucket
  }
  return out;
}

ScreenedComparison screened_comparison(const Corpus& corpus, eval::FeatureSetId set,
                                       eval::ModelKind model, const ConfoundSpec& confound,
                                       const eval::EvalConfig& cfg, bool per_fold_screening,
                                       const std::shared_ptr<eval::FoldFeatureCache>& cache) {
  ScreenedComparison cmp;

  const auto matrix = global_feature_matrix(corpus, set, cfg);
  cmp.screen = screen_features(matrix, confound, corpus);

  cmp.all_features = eval::loov_run(corpus, set, model, cfg, cache);
  cmp.zrb = eval::loov_run(corpus, set, eval::ModelKind::Zrb, cfg, cache);

  if (per_fold_screening) {
    eval::EvalConfig screened_cfg = cfg;
    // Screens each fold's matrix against the confound using training rows
    // only; level labels come from ids (blocklists depend on metadata, not
    // pain labels).
    std::map<std::string, const ParticipantRecord*> by_id;
    for (const auto& p : corpus.participants) by_id[p.id] = &p;
    const ConfoundSpec* spec = &confound;
    screened_cfg.per_fold_blocklist =
        [spec, by_id](const features::FeatureMatrix& m,
                      std::span<const std::size_t> train_rows) -> std::set<std::string> {
      Corpus train_view;
      std::vector<std::size_t> cols(m.n_features());
      for (std::size_t j = 0; j < cols.size(); ++j) cols[j] = j;
      features::FeatureMatrix sub;
      sub.feature_names = m.feature_names;
      sub.feature_set = m.feature_set;
      std::vector<std::size_t> rows(train_rows.begin(), train_rows.end());
      sub.values = m.values.take_rows(rows);
      for (std::size_t r : rows) {
        sub.participant_ids.push_back(m.participant_ids[r]);
        train_view.participants.push_back(*by_id.at(m.participant_ids[r]));
      }
      return screen_features(sub, *spec, train_view).dropped_names();
    };
    cmp.select_features = eval::loov_run(corpus, set, model, screened_cfg, cache);
  } else if (cmp.screen.dropped.empty()) {
    // no-op screen: the two runs are identical by construction
    cmp.select_features = cmp.all_features;
  } else {
    eval::EvalConfig screened_cfg = cfg;
    const auto names = cmp.screen.dropped_names();
    screened_cfg.feature_blocklist.insert(names.begin(), names.end());
    cmp.select_features = eval::loov_run(corpus, set, model, screened_cfg, cache);
  }

  const auto levels = levels_by_id(corpus, confound);
  cmp.all_by_level = eval::subgroup_scores(cmp.all_features, levels);
  cmp.select_by_level = eval::subgroup_scores(cmp.select_features, levels);
  cmp.zrb_by_level = eval::subgroup_scores(cmp.zrb, levels);
  return cmp;
}

}  // namespace painscale::confound
