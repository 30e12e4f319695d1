#include "painscale/features.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "painscale/error.hpp"

namespace painscale::features {

std::string_view to_string(FeatureSet s) {
  switch (s) {
    case FeatureSet::Verbosity: return "verbosity";
    case FeatureSet::TfIdf: return "tfidf";
    case FeatureSet::PosTfIdf: return "pos_tfidf";
    case FeatureSet::Topics: return "topics";
  }
  return "verbosity";
}

std::optional<FeatureSet> feature_set_from_string(std::string_view s) {
  if (s == "verbosity") return FeatureSet::Verbosity;
  if (s == "tfidf") return FeatureSet::TfIdf;
  if (s == "pos_tfidf") return FeatureSet::PosTfIdf;
  if (s == "topics") return FeatureSet::Topics;
  return std::nullopt;
}

FeatureMatrix FeatureMatrix::take_cols(std::span<const std::size_t> indices) const {
  FeatureMatrix out;
  out.participant_ids = participant_ids;
  out.values = values.take_cols(indices);
  out.feature_names.reserve(indices.size());
  out.feature_set.reserve(indices.size());
  for (std::size_t c : indices) {
    out.feature_names.push_back(feature_names[c]);
    out.feature_set.push_back(feature_set[c]);
  }
  return out;
}

Verbosity verbosity_features(const ParticipantRecord& p) {
  Verbosity v;
  for (const auto& seg : p.segments) {
    v.word_count += static_cast<double>(seg.tokens.size());
    v.interview_length_s += seg.duration_s;
  }
  if (v.interview_length_s > 0.0) {
    v.word_rate = v.word_count / (v.interview_length_s / 60.0);
  } else {
    v.word_rate = 0.0;
    v.zero_duration = true;
  }
  return v;
}

TermCounts build_terms(const ParticipantRecord& p, const StopwordSet& stopwords) {
  TermCounts counts;
  for (const auto& seg : p.segments)
    for (const auto& tok : seg.tokens) {
      if (stopwords.contains(tok.lemma)) continue;
      std::string term = tok.lemma;
      term += '|';
      term += to_string(tok.pos);
      ++counts[term];
    }
  return counts;
}

TermCounts build_pos_counts(const ParticipantRecord& p) {
  TermCounts counts;
  for (const auto& seg : p.segments)
    for (const auto& tok : seg.tokens) ++counts[std::string(to_string(tok.pos))];
  return counts;
}

FeatureMatrix verbosity_matrix(std::span<const ParticipantRecord> records) {
  FeatureMatrix out;
  out.feature_names = {kVerbosityNames[0], kVerbosityNames[1], kVerbosityNames[2]};
  out.feature_set = {FeatureSet::Verbosity, FeatureSet::Verbosity, FeatureSet::Verbosity};
  out.values = Matrix(records.size(), 3);
  out.participant_ids.reserve(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto v = verbosity_features(records[i]);
    out.values(i, 0) = v.word_count;
    out.values(i, 1) = v.interview_length_s;
    out.values(i, 2) = v.word_rate;
    out.participant_ids.push_back(records[i].id);
  }
  return out;
}

FeatureMatrix tfidf_matrix(const TfidfModel& model, const std::vector<TermCounts>& docs,
                           std::vector<std::string> participant_ids) {
  FeatureMatrix out;
  out.feature_names = model.feature_names();
  out.feature_set.assign(out.feature_names.size(), FeatureSet::TfIdf);
  out.values = tfidf_transform_all(model, docs);
  out.participant_ids = std::move(participant_ids);
  return out;
}

PosTfidfModel pos_tfidf_fit(const std::vector<TermCounts>& pos_docs) {
  if (pos_docs.empty()) throw Error("pos_tfidf_fit: need at least one document");
  PosTfidfModel model;
  model.n_docs = static_cast<int>(pos_docs.size());
  for (const auto& doc : pos_docs)
    for (std::size_t t = 0; t < kNumPosTags; ++t) {
      const auto it = doc.find(std::string(to_string(static_cast<PosTag>(t))));
      if (it != doc.end() && it->second > 0) ++model.doc_freq[t];
    }
  return model;
}

FeatureMatrix pos_tfidf_matrix(const PosTfidfModel& model, const std::vector<TermCounts>& pos_docs,
                               std::vector<std::string> participant_ids) {
  FeatureMatrix out;
  out.feature_names.reserve(kNumPosTags);
  for (PosTag t : all_pos_tags()) out.feature_names.emplace_back(to_string(t));
  out.feature_set.assign(kNumPosTags, FeatureSet::PosTfIdf);
  out.values = Matrix(pos_docs.size(), kNumPosTags);
  out.participant_ids = std::move(participant_ids);

  for (std::size_t i = 0; i < pos_docs.size(); ++i) {
    double norm_sq = 0.0;
    for (std::size_t t = 0; t < kNumPosTags; ++t) {
      const auto it = pos_docs[i].find(out.feature_names[t]);
      const int tf = it == pos_docs[i].end() ? 0 : it->second;
      const double idf = std::log((1.0 + model.n_docs) / (1.0 + model.doc_freq[t])) + 1.0;
      const double w = tf * idf;
      out.values(i, t) = w;
      norm_sq += w * w;
    }
    if (norm_sq > 0.0) {
      const double inv = 1.0 / std::sqrt(norm_sq);
      for (std::size_t t = 0; t < kNumPosTags; ++t) out.values(i, t) *= inv;
    }
  }
  return out;
}

FeatureMatrix topics_matrix(const TopicModel& model, const Matrix& tfidf_rows,
                            std::vector<std::string> participant_ids) {
  FeatureMatrix out;
  out.feature_names.reserve(static_cast<std::size_t>(model.k));
  for (int t = 0; t < model.k; ++t) {
    std::string name = "topic_";
    if (t < 10) name += '0';
    name += std::to_string(t);
    out.feature_names.push_back(std::move(name));
  }
  out.feature_set.assign(out.feature_names.size(), FeatureSet::Topics);
  out.values = topic_transform(model, tfidf_rows);
  out.participant_ids = std::move(participant_ids);
  return out;
}

std::vector<std::size_t> nonconstant_columns(const FeatureMatrix& m,
                                             std::span<const std::size_t> row_indices) {
  std::vector<std::size_t> keep;
  for (std::size_t j = 0; j < m.n_features(); ++j) {
    bool constant = true;
    if (!row_indices.empty()) {
      const double first = m.values(row_indices.front(), j);
      for (std::size_t r : row_indices)
        if (m.values(r, j) != first) {
          constant = false;
          break;
        }
    }
    if (!constant) keep.push_back(j);
  }
  return keep;
}

ZeroVarianceDrop drop_zero_variance(const FeatureMatrix& m) {
  std::vector<std::size_t> all_rows(m.n_participants());
  for (std::size_t i = 0; i < all_rows.size(); ++i) all_rows[i] = i;
  const auto keep = nonconstant_columns(m, all_rows);
  if (keep.empty()) throw Error("drop_zero_variance: no informative features");

  ZeroVarianceDrop out;
  std::set<std::size_t> kept(keep.begin(), keep.end());
  for (std::size_t j = 0; j < m.n_features(); ++j)
    if (!kept.count(j)) out.dropped.push_back(m.feature_names[j]);
  out.matrix = m.take_cols(keep);
  return out;
}

FeatureMatrix early_fusion(const std::vector<FeatureMatrix>& parts) {
  if (parts.empty()) throw Error("early_fusion: no inputs");
  if (parts.size() == 1) return parts.front();

  const auto& ids = parts.front().participant_ids;
  for (const auto& part : parts)
    if (part.participant_ids != ids) throw Error("early_fusion: participant order mismatch");

  FeatureMatrix out;
  out.participant_ids = ids;
  std::size_t total_cols = 0;
  for (const auto& part : parts) total_cols += part.n_features();
  out.values = Matrix(ids.size(), total_cols);
  out.feature_names.reserve(total_cols);
  out.feature_set.reserve(total_cols);

  std::set<std::string> seen;
  std::size_t offset = 0;
  for (const auto& part : parts) {
    for (std::size_t j = 0; j < part.n_features(); ++j) {
      std::string name(to_string(part.feature_set[j]));
      name += ':';
      name += part.feature_names[j];
      if (!seen.insert(name).second) throw Error("early_fusion: duplicate feature name " + name);
      out.feature_names.push_back(std::move(name));
      out.feature_set.push_back(part.feature_set[j]);
    }
    for (std::size_t i = 0; i < ids.size(); ++i)
      for (std::size_t j = 0; j < part.n_features(); ++j)
        out.values(i, offset + j) = part.values(i, j);
    offset += part.n_features();
  }
  return out;
}

std::pair<std::string, std::string> split_feature_name(const std::string& name) {
  const auto colon = name.find(':');
  if (colon == std::string::npos) return {"", name};
  const std::string prefix = name.substr(0, colon);
  if (feature_set_from_string(prefix)) return {prefix, name.substr(colon + 1)};
  return {"", name};
}

}  // namespace painscale::features
