#include "painscale/svm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "painscale/error.hpp"
#include "painscale/models.hpp"

namespace painscale::models {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTau = 1e-12;

// Two-variable SMO on the standard dual
//   min 0.5 a'Qa - e'a   s.t. y'a = 0, 0 <= a <= C,  Q_ij = y_i y_j K_ij.
// Pair selection is the maximal violating pair (ties to the lowest index),
// so the solve is deterministic for a fixed sample order.
struct SmoResult {
  std::vector<double> alpha;
  double bias = 0.0;
  double kkt_violation = 0.0;
  double objective = 0.0;
};

SmoResult smo_solve(const Matrix& kernel, std::span<const double> y, double C, double tol) {
  const std::size_t n = y.size();
  std::vector<double> alpha(n, 0.0);
  std::vector<double> grad(n, -1.0);  // G = Qa - e

  const auto q = [&](std::size_t i, std::size_t j) { return y[i] * y[j] * kernel(i, j); };

  const std::size_t max_iter = std::max<std::size_t>(10000000, n * 1000);
  double m = 0.0, M = 0.0;
  for (std::size_t iter = 0;; ++iter) {
    // i: argmax -y G over I_up, j: argmin -y G over I_low
    std::ptrdiff_t i = -1, j = -1;
    m = -kInf;
    M = kInf;
    for (std::size_t t = 0; t < n; ++t) {
      const bool in_up = (y[t] > 0 && alpha[t] < C) || (y[t] < 0 && alpha[t] > 0);
      const bool in_low = (y[t] < 0 && alpha[t] < C) || (y[t] > 0 && alpha[t] > 0);
      const double v = -y[t] * grad[t];
      if (in_up && v > m) {
        m = v;
        i = static_cast<std::ptrdiff_t>(t);
      }
      if (in_low && v < M) {
        M = v;
        j = static_cast<std::ptrdiff_t>(t);
      }
    }
    if (i < 0 || j < 0 || m - M <= tol || iter >= max_iter) break;

    const auto ui = static_cast<std::size_t>(i), uj = static_cast<std::size_t>(j);
    const double old_ai = alpha[ui], old_aj = alpha[uj];

    // quad = ||phi(x_i) - phi(x_j)||^2 in both branches
    if (y[ui] != y[uj]) {
      double quad = kernel(ui, ui) + kernel(uj, uj) - 2.0 * kernel(ui, uj);
      if (quad <= 0.0) quad = kTau;
      const double delta = (-grad[ui] - grad[uj]) / quad;
      const double diff = alpha[ui] - alpha[uj];
      alpha[ui] += delta;
      alpha[uj] += delta;
      if (diff > 0.0) {
        if (alpha[uj] < 0.0) { alpha[uj] = 0.0; alpha[ui] = diff; }
      } else {
        if (alpha[ui] < 0.0) { alpha[ui] = 0.0; alpha[uj] = -diff; }
      }
      if (diff > 0.0) {
        if (alpha[ui] > C) { alpha[ui] = C; alpha[uj] = C - diff; }
      } else {
        if (alpha[uj] > C) { alpha[uj] = C; alpha[ui] = C + diff; }
      }
    } else {
      double quad = kernel(ui, ui) + kernel(uj, uj) - 2.0 * kernel(ui, uj);
      if (quad <= 0.0) quad = kTau;
      const double delta = (grad[ui] - grad[uj]) / quad;
      const double sum = alpha[ui] + alpha[uj];
      alpha[ui] -= delta;
      alpha[uj] += delta;
      if (sum > C) {
        if (alpha[ui] > C) { alpha[ui] = C; alpha[uj] = sum - C; }
      } else {
        if (alpha[uj] < 0.0) { alpha[uj] = 0.0; alpha[ui] = sum; }
      }
      if (sum > C) {
        if (alpha[uj] > C) { alpha[uj] = C; alpha[ui] = sum - C; }
      } else {
        if (alpha[ui] < 0.0) { alpha[ui] = 0.0; alpha[uj] = sum; }
      }
    }

    const double dai = alpha[ui] - old_ai, daj = alpha[uj] - old_aj;
    for (std::size_t t = 0; t < n; ++t) grad[t] += q(t, ui) * dai + q(t, uj) * daj;
  }

  SmoResult res;
  res.kkt_violation = std::max(m - M, 0.0);
  // b averages the active bound interval; free SVs pin it exactly.
  if (std::isfinite(m) && std::isfinite(M))
    res.bias = 0.5 * (m + M);
  else if (std::isfinite(m))
    res.bias = m;
  else if (std::isfinite(M))
    res.bias = M;
  double obj = 0.0;
  for (std::size_t t = 0; t < n; ++t) obj += alpha[t] * (grad[t] - 1.0);
  res.objective = 0.5 * obj;  // 0.5 a'Qa - e'a, using G = Qa - e
  res.alpha = std::move(alpha);
  return res;
}

double matrix_variance(const Matrix& x) {
  const auto flat = x.flat();
  if (flat.empty()) return 0.0;
  double mean = 0.0;
  for (double v : flat) mean += v;
  mean /= static_cast<double>(flat.size());
  double var = 0.0;
  for (double v : flat) var += (v - mean) * (v - mean);
  return var / static_cast<double>(flat.size());
}

}  // namespace

double rbf_kernel(std::span<const double> u, std::span<const double> v, double gamma) {
  double d2 = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double d = u[i] - v[i];
    d2 += d * d;
  }
  return std::exp(-gamma * d2);
}

SvmModel svm_fit(const Matrix& x, std::span<const PainClass> y, const SvmParams& params) {
  if (y.empty() || x.rows() != y.size()) throw Error("svm_fit: bad X/y sizes");
  for (double v : x.flat())
    if (std::isnan(v)) throw Error("svm_fit: NaN in input");

  const auto counts = class_counts(y);
  std::vector<PainClass> present;
  for (std::size_t c = 0; c < kNumPainClasses; ++c)
    if (counts[c] > 0) present.push_back(static_cast<PainClass>(c));
  if (present.size() < 2) throw Error("svm_fit: need at least 2 classes");

  SvmModel model;
  model.C = params.C;
  if (params.gamma) {
    model.gamma = *params.gamma;
  } else {
    const double var = matrix_variance(x);
    if (!(var > 0.0) || x.cols() == 0)
      throw Error("svm_fit: zero-variance input, 'scale' gamma undefined");
    model.gamma = 1.0 / (static_cast<double>(x.cols()) * var);
  }
  if (!(model.gamma > 0.0)) throw Error("svm_fit: gamma must be positive");

  for (std::size_t a = 0; a < present.size(); ++a) {
    for (std::size_t b = a + 1; b < present.size(); ++b) {
      const PainClass pos = present[a], neg = present[b];
      std::vector<std::size_t> rows;
      std::vector<double> yy;
      for (std::size_t i = 0; i < y.size(); ++i) {
        if (y[i] == pos) {
          rows.push_back(i);
          yy.push_back(1.0);
        } else if (y[i] == neg) {
          rows.push_back(i);
          yy.push_back(-1.0);
        }
      }
      const Matrix sub = x.take_rows(rows);
      Matrix kernel(sub.rows(), sub.rows());
      for (std::size_t i = 0; i < sub.rows(); ++i)
        for (std::size_t j = i; j < sub.rows(); ++j) {
          const double k = rbf_kernel(sub.row(i), sub.row(j), model.gamma);
          kernel(i, j) = k;
          kernel(j, i) = k;
        }

      const SmoResult res = smo_solve(kernel, yy, params.C, params.tol);

      BinarySvm pair;
      pair.positive = pos;
      pair.negative = neg;
      pair.bias = res.bias;
      pair.kkt_violation = res.kkt_violation;
      pair.dual_objective = res.objective;
      std::vector<std::size_t> sv_rows;
      for (std::size_t i = 0; i < res.alpha.size(); ++i) {
        if (res.alpha[i] > 0.0) {
          sv_rows.push_back(i);
          pair.dual_coef.push_back(res.alpha[i] * yy[i]);
        }
      }
      pair.support_vectors = sub.take_rows(sv_rows);
      model.pairs.push_back(std::move(pair));
    }
  }
  return model;
}

PainClass svm_predict_one(const SvmModel& model, std::span<const double> row) {
  if (model.pairs.empty()) throw Error("svm_predict: empty model");
  std::array<std::size_t, kNumPainClasses> votes{};
  for (const auto& pair : model.pairs) {
    double decision = pair.bias;
    for (std::size_t i = 0; i < pair.dual_coef.size(); ++i)
      decision += pair.dual_coef[i] * rbf_kernel(pair.support_vectors.row(i), row, model.gamma);
    const PainClass winner = decision >= 0.0 ? pair.positive : pair.negative;
    ++votes[static_cast<std::size_t>(winner)];
  }
  std::size_t best = 0;
  for (std::size_t c = 1; c < kNumPainClasses; ++c)
    if (votes[c] > votes[best]) best = c;  // ties keep canonical order
  return static_cast<PainClass>(best);
}

std::vector<PainClass> svm_predict(const SvmModel& model, const Matrix& x) {
  std::vector<PainClass> out;
  out.reserve(x.rows());
  for (std::size_t i = 0; i < x.rows(); ++i) out.push_back(svm_predict_one(model, x.row(i)));
  return out;
}

}  // namespace painscale::models
