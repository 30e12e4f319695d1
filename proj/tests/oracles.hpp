#pragma once

// Independent brute-force oracles used to pin expected values. These stay
// deliberately naive and share no code with the library paths they check.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <span>
#include <vector>

#include "painscale/matrix.hpp"
#include "painscale/types.hpp"

namespace oracles {

// ---------------------------------------------------------------------------
// statistics
// ---------------------------------------------------------------------------

struct AnovaSS {
  double ss_between = 0.0;
  double ss_within = 0.0;
  double f = 0.0;
  double df1 = 0.0;
  double df2 = 0.0;
};

inline AnovaSS anova_sums_of_squares(const std::vector<std::vector<double>>& groups) {
  AnovaSS out;
  std::size_t n = 0;
  double grand = 0.0;
  for (const auto& g : groups) {
    n += g.size();
    for (double v : g) grand += v;
  }
  grand /= static_cast<double>(n);
  for (const auto& g : groups) {
    const double m = std::accumulate(g.begin(), g.end(), 0.0) / static_cast<double>(g.size());
    out.ss_between += static_cast<double>(g.size()) * (m - grand) * (m - grand);
    for (double v : g) out.ss_within += (v - m) * (v - m);
  }
  out.df1 = static_cast<double>(groups.size() - 1);
  out.df2 = static_cast<double>(n - groups.size());
  out.f = (out.ss_between / out.df1) / (out.ss_within / out.df2);
  return out;
}

inline double chi_square_statistic(const std::vector<std::vector<long long>>& table) {
  const std::size_t r = table.size(), c = table.front().size();
  std::vector<double> row(r, 0.0), col(c, 0.0);
  double total = 0.0;
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) {
      row[i] += static_cast<double>(table[i][j]);
      col[j] += static_cast<double>(table[i][j]);
      total += static_cast<double>(table[i][j]);
    }
  double stat = 0.0;
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) {
      const double e = row[i] * col[j] / total;
      const double d = static_cast<double>(table[i][j]) - e;
      stat += d * d / e;
    }
  return stat;
}

inline double pearson_direct(std::span<const double> x, std::span<const double> y) {
  const auto n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double cov = 0.0, vx = 0.0, vy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    cov += (x[i] - mx) * (y[i] - my);
    vx += (x[i] - mx) * (x[i] - mx);
    vy += (y[i] - my) * (y[i] - my);
  }
  return cov / std::sqrt(vx * vy);
}

/// Adaptive Simpson quadrature, used to integrate densities into CDFs.
inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double eps = 1e-12, int depth = 40) {
  const auto simpson = [&](double lo, double hi) {
    return (hi - lo) / 6.0 * (f(lo) + 4.0 * f(0.5 * (lo + hi)) + f(hi));
  };
  std::function<double(double, double, double, double, int)> rec =
      [&](double lo, double hi, double whole, double tol, int d) -> double {
    const double mid = 0.5 * (lo + hi);
    const double left = simpson(lo, mid), right = simpson(mid, hi);
    if (d <= 0 || std::fabs(left + right - whole) <= 15.0 * tol)
      return left + right + (left + right - whole) / 15.0;
    return rec(lo, mid, left, tol / 2.0, d - 1) + rec(mid, hi, right, tol / 2.0, d - 1);
  };
  return rec(a, b, simpson(a, b), eps, depth);
}

inline double chi2_pdf(double x, double df) {
  if (x <= 0.0) return 0.0;
  const double a = 0.5 * df;
  return std::exp((a - 1.0) * std::log(x) - 0.5 * x - a * std::log(2.0) - std::lgamma(a));
}

inline double f_pdf(double x, double d1, double d2) {
  if (x <= 0.0) return 0.0;
  const double half1 = 0.5 * d1, half2 = 0.5 * d2;
  const double log_beta = std::lgamma(half1) + std::lgamma(half2) - std::lgamma(half1 + half2);
  return std::exp(half1 * std::log(d1 / d2) + (half1 - 1.0) * std::log(x) -
                  (half1 + half2) * std::log(1.0 + d1 * x / d2) - log_beta);
}

// ---------------------------------------------------------------------------
// classifiers
// ---------------------------------------------------------------------------

/// Projected-gradient maximizer of the SVM dual
///   max  e'a - 0.5 sum_ij a_i a_j y_i y_j K_ij
///   s.t. 0 <= a <= C,  y'a = 0.
/// The feasible-set projection is exact: clip(v + t*y) with t found by
/// bisection on the monotone function y'clip(v + t*y).
struct DualOracle {
  std::vector<double> alpha;
  double objective = 0.0;  // maximization form
};

inline std::vector<double> project_box_hyperplane(std::vector<double> v, std::span<const double> y,
                                                  double C) {
  const auto clipped_dot = [&](double t) {
    double s = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i)
      s += y[i] * std::clamp(v[i] + t * y[i], 0.0, C);
    return s;
  };
  double lo = -1.0, hi = 1.0;
  while (clipped_dot(lo) > 0.0) lo *= 2.0;
  while (clipped_dot(hi) < 0.0) hi *= 2.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (clipped_dot(mid) > 0.0)
      hi = mid;
    else
      lo = mid;
  }
  const double t = 0.5 * (lo + hi);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::clamp(v[i] + t * y[i], 0.0, C);
  return v;
}

inline DualOracle svm_dual_oracle(const painscale::Matrix& kernel, std::span<const double> y,
                                  double C, int iters = 200000) {
  const std::size_t n = y.size();
  std::vector<double> alpha(n, 0.0);
  alpha = project_box_hyperplane(alpha, y, C);

  // Lipschitz constant of the gradient: ||Q||_F bound.
  double lip = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) lip += kernel(i, j) * kernel(i, j);
  const double step = 1.0 / (std::sqrt(lip) + 1.0);

  std::vector<double> grad(n);
  for (int it = 0; it < iters; ++it) {
    for (std::size_t i = 0; i < n; ++i) {
      double qa = 0.0;
      for (std::size_t j = 0; j < n; ++j) qa += y[i] * y[j] * kernel(i, j) * alpha[j];
      grad[i] = 1.0 - qa;
    }
    std::vector<double> next(n);
    for (std::size_t i = 0; i < n; ++i) next[i] = alpha[i] + step * grad[i];
    next = project_box_hyperplane(std::move(next), y, C);
    double delta = 0.0;
    for (std::size_t i = 0; i < n; ++i) delta = std::max(delta, std::fabs(next[i] - alpha[i]));
    alpha = std::move(next);
    if (delta < 1e-14) break;
  }

  DualOracle out;
  double obj = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    obj += alpha[i];
    for (std::size_t j = 0; j < n; ++j)
      obj -= 0.5 * alpha[i] * alpha[j] * y[i] * y[j] * kernel(i, j);
  }
  out.objective = obj;
  out.alpha = std::move(alpha);
  return out;
}

/// Exhaustive 1-D CART split search: every midpoint between consecutive
/// distinct values, Gini gain recomputed from scratch.
struct BestSplit1D {
  double threshold = 0.0;
  double gain = -1.0;
};

inline double gini_of(const std::vector<painscale::PainClass>& ys) {
  std::array<double, 3> counts{};
  for (auto c : ys) counts[static_cast<std::size_t>(c)] += 1.0;
  const double n = static_cast<double>(ys.size());
  if (n == 0.0) return 0.0;
  double g = 1.0;
  for (double c : counts) g -= (c / n) * (c / n);
  return g;
}

inline BestSplit1D best_split_1d(std::vector<double> x, std::vector<painscale::PainClass> y) {
  std::vector<std::size_t> order(x.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });

  BestSplit1D best;
  const double parent = gini_of(y);
  for (std::size_t r = 0; r + 1 < order.size(); ++r) {
    if (x[order[r]] == x[order[r + 1]]) continue;
    const double threshold = 0.5 * (x[order[r]] + x[order[r + 1]]);
    std::vector<painscale::PainClass> left, right;
    for (std::size_t i = 0; i < x.size(); ++i)
      (x[i] <= threshold ? left : right).push_back(y[i]);
    const double weighted =
        (static_cast<double>(left.size()) * gini_of(left) +
         static_cast<double>(right.size()) * gini_of(right)) /
        static_cast<double>(x.size());
    const double gain = parent - weighted;
    if (gain > best.gain) {
      best.gain = gain;
      best.threshold = threshold;
    }
  }
  return best;
}

// ---------------------------------------------------------------------------
// metrics
// ---------------------------------------------------------------------------

inline double weighted_f1_counting(std::span<const painscale::PainClass> yt,
                                   std::span<const painscale::PainClass> yp) {
  double total = 0.0;
  for (int cls = 0; cls < 3; ++cls) {
    double tp = 0, fp = 0, fn = 0;
    for (std::size_t i = 0; i < yt.size(); ++i) {
      const int t = static_cast<int>(yt[i]), p = static_cast<int>(yp[i]);
      if (t == cls && p == cls) ++tp;
      if (t != cls && p == cls) ++fp;
      if (t == cls && p != cls) ++fn;
    }
    const double support = tp + fn;
    if (support == 0) continue;
    const double prec = tp + fp > 0 ? tp / (tp + fp) : 0.0;
    const double rec = tp / support;
    const double f1 = prec + rec > 0 ? 2 * prec * rec / (prec + rec) : 0.0;
    total += support * f1;
  }
  return total / static_cast<double>(yt.size());
}

}  // namespace oracles
