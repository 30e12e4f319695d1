#pragma once

#include <map>
#include <string>
#include <vector>

#include "painscale/matrix.hpp"

namespace painscale::features {

/// Term counts for one document. An ordered map keeps every downstream
/// iteration deterministic.
using TermCounts = std::map<std::string, int>;

/// Fitted TF-IDF vocabulary: term -> column, document frequencies, corpus
/// size. Weighting is tf * (ln((1+N)/(1+df)) + 1) with per-document L2
/// normalization; columns are the training terms in lexicographic order.
struct TfidfModel {
  std::map<std::string, std::size_t> vocabulary;
  std::vector<int> doc_freq;  // by column
  int n_docs = 0;

  std::vector<std::string> feature_names() const;
  double idf(std::size_t column) const;
};

/// Fits vocabulary and document frequencies on the given documents.
/// Throws when the union vocabulary is empty.
TfidfModel tfidf_fit(const std::vector<TermCounts>& docs);

/// Maps a document onto the fitted vocabulary; unseen terms contribute
/// nothing and an all-out-of-vocabulary document yields the zero vector.
std::vector<double> tfidf_transform(const TfidfModel& model, const TermCounts& doc);

Matrix tfidf_transform_all(const TfidfModel& model, const std::vector<TermCounts>& docs);

}  // namespace painscale::features
