#include "painscale/interpret.hpp"

#include <algorithm>

#include "painscale/error.hpp"

namespace painscale::interpret {

namespace {

struct ParsedName {
  bool is_term = false;  // parses as lemma|POS
  std::string lemma;
  std::string pos_code;
};

// Accepts plain TF-IDF terms ("dor|NOUN") and their fused forms
// ("tfidf:dor|NOUN").
ParsedName parse_name(const std::string& name) {
  const auto [prefix, payload] = features::split_feature_name(name);
  if (!prefix.empty() && prefix != "tfidf") return {};
  const auto bar = payload.rfind('|');
  if (bar == std::string::npos || bar == 0 || bar + 1 >= payload.size()) return {};
  const std::string code = payload.substr(bar + 1);
  if (!pos_tag_from_string(code)) return {};
  return {true, payload.substr(0, bar), code};
}

}  // namespace

std::vector<std::pair<std::string, int>> aggregate_selected(const eval::EvalReport& report) {
  if (report.folds.empty()) throw Error("aggregate_selected: report has no folds");
  return report.unique_selected;
}

std::map<std::string, double> pos_distribution(std::span<const std::string> feature_names,
                                               std::vector<std::string>* warnings) {
  std::map<std::string, double> counts;
  for (const auto& name : feature_names) {
    const auto parsed = parse_name(name);
    if (parsed.is_term) {
      counts[parsed.pos_code] += 1.0;
    } else {
      counts[kOtherBucket] += 1.0;
      if (warnings) warnings->push_back("feature not in lemma|POS form: " + name);
    }
  }
  const double total = static_cast<double>(feature_names.size());
  if (total > 0.0)
    for (auto& [tag, c] : counts) c /= total;
  return counts;
}

std::map<PainClass, std::map<std::string, double>> class_mean_weights(
    const features::FeatureMatrix& m, std::span<const PainClass> y,
    std::span<const std::string> feature_names, GroupBy group_by) {
  if (y.size() != m.n_participants()) throw Error("class_mean_weights: label/matrix size mismatch");

  std::map<std::string, std::size_t> column_of;
  for (std::size_t j = 0; j < m.n_features(); ++j) column_of[m.feature_names[j]] = j;

  // group label -> participating columns
  std::map<std::string, std::vector<std::size_t>> groups;
  for (const auto& name : feature_names) {
    const auto parsed = parse_name(name);
    const std::string payload = features::split_feature_name(name).second;
    const auto it = column_of.find(payload);
    if (it == column_of.end()) continue;  // not a column of this matrix
    const std::string key = group_by == GroupBy::Pos
                                ? (parsed.is_term ? parsed.pos_code : std::string(kOtherBucket))
                                : payload;
    groups[key].push_back(it->second);
  }

  std::map<PainClass, std::map<std::string, double>> out;
  for (const PainClass c : kPainClasses) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < y.size(); ++i)
      if (y[i] == c) members.push_back(i);
    if (members.empty()) continue;
    auto& row = out[c];
    for (const auto& [key, cols] : groups) {
      double sum = 0.0;
      for (std::size_t i : members)
        for (std::size_t j : cols) sum += m.values(i, j);
      row[key] = sum / (static_cast<double>(members.size()) * static_cast<double>(cols.size()));
    }
  }
  return out;
}

std::map<std::string, RankedWords> top_words_per_pos(const features::FeatureMatrix& m,
                                                     std::span<const std::string> feature_names,
                                                     std::size_t n) {
  std::map<std::string, std::size_t> column_of;
  for (std::size_t j = 0; j < m.n_features(); ++j) column_of[m.feature_names[j]] = j;

  std::map<std::string, RankedWords> by_tag;
  for (const auto& name : feature_names) {
    const auto parsed = parse_name(name);
    if (!parsed.is_term) continue;
    const std::string payload = features::split_feature_name(name).second;
    const auto it = column_of.find(payload);
    if (it == column_of.end()) continue;
    double mean = 0.0;
    for (std::size_t i = 0; i < m.n_participants(); ++i) mean += m.values(i, it->second);
    mean /= static_cast<double>(m.n_participants());
    by_tag[parsed.pos_code].push_back({parsed.lemma, mean});
  }

  for (auto& [tag, words] : by_tag) {
    std::sort(words.begin(), words.end(), [](const auto& a, const auto& b) {
      if (a.second != b.second) return a.second > b.second;
      return a.first < b.first;
    });
    if (words.size() > n) words.resize(n);
  }
  if (n == 0)
    for (auto& [tag, words] : by_tag) words.clear();
  return by_tag;
}

InterpretReport build_report(const eval::EvalReport& eval_report,
                             const features::FeatureMatrix& global_tfidf,
                             std::span<const PainClass> y, std::size_t top_n) {
  InterpretReport report;
  report.unique_selected = aggregate_selected(eval_report);

  std::vector<std::string> names;
  names.reserve(report.unique_selected.size());
  for (const auto& [name, count] : report.unique_selected) names.push_back(name);

  report.pos_fraction = pos_distribution(names, &report.warnings);
  report.class_pos_weight = class_mean_weights(global_tfidf, y, names, GroupBy::Pos);
  report.top_words = top_words_per_pos(global_tfidf, names, top_n);

  // Per-word class weights restricted to the top words (the per-tag charts).
  const auto word_weights = class_mean_weights(global_tfidf, y, names, GroupBy::Word);
  for (const auto& [cls, by_feature] : word_weights) {
    for (const auto& [tag, ranked] : report.top_words) {
      for (const auto& [word, weight] : ranked) {
        const std::string term = word + "|" + tag;
        const auto it = by_feature.find(term);
        if (it != by_feature.end()) report.class_word_weight[cls][tag][word] = it->second;
      }
    }
  }
  return report;
}

}  // namespace painscale::interpret
