#include "painscale/topics.hpp"

#include <cmath>

#include "painscale/error.hpp"
#include "painscale/rng.hpp"

namespace painscale::features {

namespace {

constexpr double kDenomGuard = 1e-12;
constexpr double kRelTol = 1e-6;

double frobenius_error(const Matrix& x, const Matrix& w, const Matrix& h) {
  double err = 0.0;
  const std::size_t n = x.rows(), v = x.cols(), k = w.cols();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < v; ++j) {
      double rec = 0.0;
      for (std::size_t t = 0; t < k; ++t) rec += w(i, t) * h(t, j);
      const double d = x(i, j) - rec;
      err += d * d;
    }
  }
  return err;
}

// W <- W .* (X H^T) ./ (W H H^T)
void update_w(const Matrix& x, Matrix& w, const Matrix& h) {
  const std::size_t n = x.rows(), v = x.cols(), k = w.cols();
  Matrix hht(k, k, 0.0);
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = 0; b < k; ++b) {
      double s = 0.0;
      for (std::size_t j = 0; j < v; ++j) s += h(a, j) * h(b, j);
      hht(a, b) = s;
    }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t t = 0; t < k; ++t) {
      double num = 0.0;
      for (std::size_t j = 0; j < v; ++j) num += x(i, j) * h(t, j);
      double den = 0.0;
      for (std::size_t a = 0; a < k; ++a) den += w(i, a) * hht(a, t);
      w(i, t) *= num / (den + kDenomGuard);
    }
  }
}

// H <- H .* (W^T X) ./ (W^T W H)
void update_h(const Matrix& x, const Matrix& w, Matrix& h) {
  const std::size_t n = x.rows(), v = x.cols(), k = w.cols();
  Matrix wtw(k, k, 0.0);
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = 0; b < k; ++b) {
      double s = 0.0;
      for (std::size_t i = 0; i < n; ++i) s += w(i, a) * w(i, b);
      wtw(a, b) = s;
    }
  for (std::size_t t = 0; t < k; ++t) {
    for (std::size_t j = 0; j < v; ++j) {
      double num = 0.0;
      for (std::size_t i = 0; i < n; ++i) num += w(i, t) * x(i, j);
      double den = 0.0;
      for (std::size_t a = 0; a < k; ++a) den += wtw(t, a) * h(a, j);
      h(t, j) *= num / (den + kDenomGuard);
    }
  }
}

double matrix_mean(const Matrix& m) {
  double s = 0.0;
  for (double v : m.flat()) s += v;
  return m.flat().empty() ? 0.0 : s / static_cast<double>(m.flat().size());
}

}  // namespace

TopicModel topic_fit(const Matrix& x, int k, int iters, std::uint64_t seed) {
  if (k < 2) throw Error("topic_fit: k must be >= 2");
  if (static_cast<std::size_t>(k) > x.cols())
    throw Error("topic_fit: k exceeds vocabulary size");
  for (double v : x.flat())
    if (v < 0.0) throw Error("topic_fit: input must be nonnegative");

  const std::size_t n = x.rows(), vocab = x.cols();
  const std::size_t kk = static_cast<std::size_t>(k);
  Rng rng(seed);
  const double scale = std::sqrt(std::max(matrix_mean(x), kDenomGuard) / k);

  Matrix w(n, kk), h(kk, vocab);
  for (double& v : w.flat()) v = scale * (rng.uniform() + kDenomGuard);
  for (double& v : h.flat()) v = scale * (rng.uniform() + kDenomGuard);

  TopicModel model;
  model.k = k;
  model.objective_trace.reserve(static_cast<std::size_t>(iters) + 1);
  double prev = frobenius_error(x, w, h);
  model.objective_trace.push_back(prev);
  for (int it = 0; it < iters; ++it) {
    update_h(x, w, h);
    update_w(x, w, h);
    const double err = frobenius_error(x, w, h);
    model.objective_trace.push_back(err);
    if (std::fabs(prev - err) <= kRelTol * std::max(prev, kDenomGuard)) break;
    prev = err;
  }
  model.topic_term = std::move(h);
  return model;
}

Matrix topic_transform(const TopicModel& model, const Matrix& x) {
  if (x.cols() != model.topic_term.cols())
    throw Error("topic_transform: vocabulary size mismatch");
  const std::size_t n = x.rows();
  const std::size_t kk = static_cast<std::size_t>(model.k);

  // Deterministic all-ones initialization; only W is updated here.
  Matrix w(n, kk, 1.0);
  double prev = frobenius_error(x, w, model.topic_term);
  for (int it = 0; it < kDefaultTopicIters; ++it) {
    update_w(x, w, model.topic_term);
    const double err = frobenius_error(x, w, model.topic_term);
    if (std::fabs(prev - err) <= kRelTol * std::max(prev, kDenomGuard)) break;
    prev = err;
  }

  for (std::size_t i = 0; i < n; ++i) {
    double row_sum = 0.0;
    for (std::size_t t = 0; t < kk; ++t) row_sum += w(i, t);
    if (row_sum > 0.0) {
      for (std::size_t t = 0; t < kk; ++t) w(i, t) /= row_sum;
    } else {
      for (std::size_t t = 0; t < kk; ++t) w(i, t) = 1.0 / static_cast<double>(kk);
    }
  }
  return w;
}

}  // namespace painscale::features
