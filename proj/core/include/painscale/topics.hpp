#pragma once

#include <cstdint>
#include <vector>

#include "painscale/matrix.hpp"

namespace painscale::features {

/// Nonnegative matrix factorization of the document-term matrix, used to
/// summarize each participant as a k-topic weight vector.
struct TopicModel {
  Matrix topic_term;  // k x vocab, nonnegative
  int k = 12;
  std::vector<double> objective_trace;  // squared Frobenius error per iteration, non-increasing

  bool operator==(const TopicModel&) const = default;
};

constexpr int kDefaultTopicCount = 12;
constexpr int kDefaultTopicIters = 200;

/// Multiplicative-update NMF on a nonnegative matrix X (documents x terms).
/// The seed fixes the random positive initialization; iteration stops at
/// `iters` or when the relative objective change drops below 1e-6.
/// Throws when k exceeds the vocabulary size.
TopicModel topic_fit(const Matrix& x, int k = kDefaultTopicCount, int iters = kDefaultTopicIters,
                     std::uint64_t seed = 0);

/// Solves nonnegative document-topic weights against the frozen topic_term
/// factor and row-normalizes to sum 1 (all-zero rows become uniform 1/k).
Matrix topic_transform(const TopicModel& model, const Matrix& x);

}  // namespace painscale::features
