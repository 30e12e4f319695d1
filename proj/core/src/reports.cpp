#include "painscale/reports.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "painscale/error.hpp"

namespace painscale::reports {

using nlohmann::json;

namespace {

std::string score6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

json confusion_to_json(const Matrix& m) {
  json rows = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

json fold_to_json(const eval::FoldRecord& fold) {
  json branches = json::array();
  for (const auto& b : fold.branches) {
    branches.push_back({{"feature_set", std::string(eval::to_string(b.set))},
                        {"chosen_k", b.chosen_k},
                        {"selected_features", b.selected_features},
                        {"prediction", std::string(to_string(b.prediction))}});
  }
  return json{{"held_out_id", fold.held_out_id},
              {"predicted", std::string(to_string(fold.predicted))},
              {"true", std::string(to_string(fold.truth))},
              {"chosen_k", fold.chosen_k()},
              {"selected_features", fold.selected_features()},
              {"branches", std::move(branches)}};
}

json subgroup_to_json(const eval::SubgroupScores& s) {
  json by_level = json::object();
  for (const auto& [level, score] : s.by_level) by_level[level] = score;
  return json{{"by_level", std::move(by_level)}, {"aggregate", s.aggregate}, {"warnings", s.warnings}};
}

json test_result_to_json(const stats::TestResult& r) {
  return json{{"statistic", r.statistic},
              {"df1", r.df1},
              {"df2", r.df2},
              {"p", r.p},
              {"low_expected_counts", r.low_expected_counts}};
}

}  // namespace

std::string eval_report_to_json(const eval::EvalReport& report) {
  json folds = json::array();
  for (const auto& fold : report.folds) folds.push_back(fold_to_json(fold));
  json selected = json::array();
  for (const auto& [name, count] : report.unique_selected)
    selected.push_back({{"feature", name}, {"folds", count}});
  const json j{{"config_fingerprint", report.config_fingerprint},
               {"feature_set", std::string(eval::to_string(report.feature_set))},
               {"model", std::string(eval::to_string(report.model))},
               {"weighted_f1", report.weighted_f1},
               {"confusion", confusion_to_json(report.confusion)},
               {"unique_selected_features", std::move(selected)},
               {"folds", std::move(folds)}};
  return j.dump(2);
}

std::string table3_csv(
    const std::map<std::pair<eval::FeatureSetId, eval::ModelKind>, double>& scores) {
  std::ostringstream out;
  out << "feature_set,zrb,dt,svm\n";
  for (const auto set : eval::all_feature_set_ids()) {
    bool any = false;
    for (const auto model : eval::all_model_kinds())
      if (scores.count({set, model})) any = true;
    if (!any) continue;
    out << eval::to_string(set);
    for (const auto model : eval::all_model_kinds()) {
      const auto it = scores.find({set, model});
      out << ',' << (it == scores.end() ? "" : score6(it->second));
    }
    out << '\n';
  }
  return out.str();
}

std::string table4_json(const eval::EvalReport& model_report, const eval::EvalReport& zrb_report) {
  const json j{
      {"model",
       {{"feature_set", std::string(eval::to_string(model_report.feature_set))},
        {"model", std::string(eval::to_string(model_report.model))},
        {"weighted_f1", model_report.weighted_f1},
        {"confusion", confusion_to_json(model_report.confusion)}}},
      {"zrb",
       {{"weighted_f1", zrb_report.weighted_f1}, {"confusion", confusion_to_json(zrb_report.confusion)}}},
      {"classes", {"mild", "moderate", "severe"}},
  };
  return j.dump(2);
}

std::string table5_csv(const std::vector<confound::ScreenedComparison>& comparisons) {
  std::ostringstream header, zrb_row, all_row, select_row, agg_row;
  header << "row";
  zrb_row << "zrb";
  all_row << "all_features";
  select_row << "select_features";
  agg_row << "aggregate";
  for (const auto& cmp : comparisons) {
    for (const auto& [level, score] : cmp.zrb_by_level.by_level) {
      header << ',' << cmp.screen.confound << ':' << level;
      zrb_row << ',' << score6(score);
      const auto all_it = cmp.all_by_level.by_level.find(level);
      const auto sel_it = cmp.select_by_level.by_level.find(level);
      all_row << ',' << (all_it == cmp.all_by_level.by_level.end() ? "" : score6(all_it->second));
      select_row << ','
                 << (sel_it == cmp.select_by_level.by_level.end() ? "" : score6(sel_it->second));
      agg_row << ',' << score6(cmp.select_by_level.aggregate);
    }
  }
  std::ostringstream out;
  out << header.str() << '\n'
      << zrb_row.str() << '\n'
      << all_row.str() << '\n'
      << select_row.str() << '\n'
      << agg_row.str() << '\n';
  return out.str();
}

std::string screen_report_json(const std::vector<confound::ScreenedComparison>& comparisons) {
  json arr = json::array();
  for (const auto& cmp : comparisons) {
    json dropped = json::array();
    for (const auto& d : cmp.screen.dropped)
      dropped.push_back({{"feature", d.name}, {"statistic", d.statistic}, {"p_or_r", d.p_or_r}});
    arr.push_back({{"confound", cmp.screen.confound},
                   {"dropped", std::move(dropped)},
                   {"warnings", cmp.screen.warnings},
                   {"all_features_f1", cmp.all_features.weighted_f1},
                   {"select_features_f1", cmp.select_features.weighted_f1},
                   {"zrb_f1", cmp.zrb.weighted_f1},
                   {"all_by_level", subgroup_to_json(cmp.all_by_level)},
                   {"select_by_level", subgroup_to_json(cmp.select_by_level)},
                   {"zrb_by_level", subgroup_to_json(cmp.zrb_by_level)},
                   {"all_fingerprint", cmp.all_features.config_fingerprint},
                   {"select_fingerprint", cmp.select_features.config_fingerprint}});
  }
  return json{{"comparisons", std::move(arr)}}.dump(2);
}

std::string intensity_report_json(const confound::IntensityReport& report) {
  json tests = json::array();
  for (const auto& t : report.tests)
    tests.push_back(
        {{"confound", t.confound}, {"test", t.test}, {"result", test_result_to_json(t.result)}});
  return json{{"tests", std::move(tests)}, {"warnings", report.warnings}}.dump(2);
}

std::string intensity_report_csv(const confound::IntensityReport& report) {
  std::ostringstream out;
  out << "confound,test,statistic,df1,df2,p,low_expected_counts\n";
  for (const auto& t : report.tests) {
    char stat[32];
    std::snprintf(stat, sizeof(stat), "%.9g", t.result.statistic);
    out << t.confound << ',' << t.test << ',' << stat << ',' << t.result.df1 << ',' << t.result.df2
        << ',' << score6(t.result.p) << ',' << (t.result.low_expected_counts ? 1 : 0) << '\n';
  }
  return out.str();
}

std::string fig1_csv(const interpret::InterpretReport& report) {
  std::ostringstream out;
  out << "pos,fraction\n";
  for (const auto& [tag, fraction] : report.pos_fraction) out << tag << ',' << score6(fraction) << '\n';
  return out.str();
}

std::string fig2_csv(const interpret::InterpretReport& report) {
  std::ostringstream out;
  out << "class,pos,mean_weight\n";
  for (const auto& [cls, row] : report.class_pos_weight)
    for (const auto& [tag, weight] : row) {
      char w[32];
      std::snprintf(w, sizeof(w), "%.9g", weight);
      out << to_string(cls) << ',' << tag << ',' << w << '\n';
    }
  return out.str();
}

std::string table7_csv(const interpret::InterpretReport& report) {
  std::ostringstream out;
  out << "pos,rank,word,mean_weight\n";
  for (const auto& [tag, words] : report.top_words) {
    int rank = 1;
    for (const auto& [word, weight] : words) {
      char w[32];
      std::snprintf(w, sizeof(w), "%.9g", weight);
      out << tag << ',' << rank++ << ',' << word << ',' << w << '\n';
    }
  }
  return out.str();
}

std::string fig3_csv(const interpret::InterpretReport& report) {
  std::ostringstream out;
  out << "class,pos,word,mean_weight\n";
  for (const auto& [cls, by_tag] : report.class_word_weight)
    for (const auto& [tag, by_word] : by_tag)
      for (const auto& [word, weight] : by_word) {
        char w[32];
        std::snprintf(w, sizeof(w), "%.9g", weight);
        out << to_string(cls) << ',' << tag << ',' << word << ',' << w << '\n';
      }
  return out.str();
}

std::string feature_matrix_csv(const features::FeatureMatrix& m) {
  std::ostringstream out;
  out << "participant_id";
  for (const auto& name : m.feature_names) out << ',' << name;
  out << '\n';
  for (std::size_t i = 0; i < m.n_participants(); ++i) {
    out << m.participant_ids[i];
    for (std::size_t j = 0; j < m.n_features(); ++j) {
      char buf[40];
      std::snprintf(buf, sizeof(buf), "%.17g", m.values(i, j));
      out << ',' << buf;
    }
    out << '\n';
  }
  return out.str();
}

std::string feature_sets_sidecar_json(const features::FeatureMatrix& m) {
  json j = json::object();
  for (std::size_t c = 0; c < m.n_features(); ++c)
    j[m.feature_names[c]] = std::string(features::to_string(m.feature_set[c]));
  return j.dump(2);
}

std::string ingest_report_json(const Corpus& corpus) {
  json rejects = json::array();
  for (const auto& r : corpus.ingest_rejects)
    rejects.push_back({{"id", r.id}, {"reason", r.reason}});
  std::array<int, kNumPainClasses> class_counts{};
  for (const auto& p : corpus.participants) ++class_counts[static_cast<std::size_t>(p.pain_class)];
  return json{{"participants", corpus.participants.size()},
              {"rejects", std::move(rejects)},
              {"class_counts",
               {{"mild", class_counts[0]}, {"moderate", class_counts[1]}, {"severe", class_counts[2]}}}}
      .dump(2);
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write file: " + path.string());
  out << content;
}

}  // namespace painscale::reports
