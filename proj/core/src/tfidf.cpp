#include "painscale/tfidf.hpp"

#include <cmath>

#include "painscale/error.hpp"

namespace painscale::features {

std::vector<std::string> TfidfModel::feature_names() const {
  std::vector<std::string> names(vocabulary.size());
  for (const auto& [term, col] : vocabulary) names[col] = term;
  return names;
}

double TfidfModel::idf(std::size_t column) const {
  return std::log((1.0 + n_docs) / (1.0 + doc_freq[column])) + 1.0;
}

TfidfModel tfidf_fit(const std::vector<TermCounts>& docs) {
  if (docs.empty()) throw Error("tfidf_fit: need at least one document");
  TfidfModel model;
  model.n_docs = static_cast<int>(docs.size());
  std::map<std::string, int> df;
  for (const auto& doc : docs)
    for (const auto& [term, count] : doc)
      if (count > 0) ++df[term];
  if (df.empty()) throw Error("tfidf_fit: empty vocabulary");
  model.doc_freq.reserve(df.size());
  for (const auto& [term, freq] : df) {  // map order = lexicographic columns
    model.vocabulary.emplace(term, model.doc_freq.size());
    model.doc_freq.push_back(freq);
  }
  return model;
}

std::vector<double> tfidf_transform(const TfidfModel& model, const TermCounts& doc) {
  std::vector<double> out(model.vocabulary.size(), 0.0);
  double norm_sq = 0.0;
  for (const auto& [term, count] : doc) {
    if (count <= 0) continue;
    const auto it = model.vocabulary.find(term);
    if (it == model.vocabulary.end()) continue;
    const double w = static_cast<double>(count) * model.idf(it->second);
    out[it->second] = w;
    norm_sq += w * w;
  }
  if (norm_sq > 0.0) {
    const double inv = 1.0 / std::sqrt(norm_sq);
    for (double& v : out) v *= inv;
  }
  return out;
}

Matrix tfidf_transform_all(const TfidfModel& model, const std::vector<TermCounts>& docs) {
  Matrix out(docs.size(), model.vocabulary.size());
  for (std::size_t i = 0; i < docs.size(); ++i) {
    const auto row = tfidf_transform(model, docs[i]);
    for (std::size_t j = 0; j < row.size(); ++j) out(i, j) = row[j];
  }
  return out;
}

}  // namespace painscale::features
