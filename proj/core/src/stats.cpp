#include "painscale/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "painscale/error.hpp"

namespace painscale::stats {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kMaxIter = 500;
constexpr double kConvEps = 1e-16;

bool all_equal(std::span<const double> v) {
  for (double x : v)
    if (x != v.front()) return false;
  return true;
}

double mean_of(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

// Continued fraction for the regularized incomplete beta (Lentz).
double beta_cf(double x, double a, double b) {
  const double tiny = 1e-300;
  const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < tiny) d = tiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kConvEps) break;
  }
  return h;
}

// Lower incomplete gamma, series representation (x < a + 1).
double gamma_series(double a, double x) {
  double ap = a;
  double sum = 1.0 / a;
  double del = sum;
  for (int n = 0; n < kMaxIter * 4; ++n) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::fabs(del) < std::fabs(sum) * kConvEps) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Upper incomplete gamma, continued fraction (x >= a + 1).
double gamma_cf(double a, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= kMaxIter * 4; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kConvEps) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

TestResult anova_from_ss(double ss_between, double ss_within, double df1, double df2) {
  TestResult r;
  r.df1 = df1;
  r.df2 = df2;
  ss_between = std::max(ss_between, 0.0);
  ss_within = std::max(ss_within, 0.0);
  if (ss_between == 0.0) {
    r.statistic = 0.0;
    r.p = 1.0;
    return r;
  }
  if (ss_within == 0.0) {
    r.statistic = kInf;
    r.p = 0.0;
    return r;
  }
  r.statistic = (ss_between / df1) / (ss_within / df2);
  r.p = 1.0 - f_cdf(r.statistic, df1, df2);
  return r;
}

}  // namespace

double regularized_incomplete_beta(double x, double a, double b) {
  if (!std::isfinite(x) || !std::isfinite(a) || !std::isfinite(b) || a <= 0.0 || b <= 0.0 ||
      x < 0.0 || x > 1.0)
    throw Error("regularized_incomplete_beta: invalid argument");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double ln_front =
      std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log(1.0 - x);
  if (x < (a + 1.0) / (a + b + 2.0)) return std::exp(ln_front) * beta_cf(x, a, b) / a;
  return 1.0 - std::exp(ln_front) * beta_cf(1.0 - x, b, a) / b;
}

double regularized_lower_incomplete_gamma(double a, double x) {
  if (!std::isfinite(a) || !std::isfinite(x) || a <= 0.0 || x < 0.0)
    throw Error("regularized_lower_incomplete_gamma: invalid argument");
  if (x == 0.0) return 0.0;
  if (x < a + 1.0) return gamma_series(a, x);
  return 1.0 - gamma_cf(a, x);
}

double f_cdf(double x, double df1, double df2) {
  if (!std::isfinite(x) || !std::isfinite(df1) || !std::isfinite(df2) || df1 <= 0.0 || df2 <= 0.0)
    throw Error("f_cdf: invalid argument");
  if (x < 0.0) throw Error("f_cdf: x must be >= 0");
  if (x == 0.0) return 0.0;
  const double z = df1 * x / (df1 * x + df2);
  return regularized_incomplete_beta(z, 0.5 * df1, 0.5 * df2);
}

double chi2_cdf(double x, double df) {
  if (!std::isfinite(x) || !std::isfinite(df) || df <= 0.0) throw Error("chi2_cdf: invalid argument");
  if (x < 0.0) throw Error("chi2_cdf: x must be >= 0");
  if (x == 0.0) return 0.0;
  return regularized_lower_incomplete_gamma(0.5 * df, 0.5 * x);
}

TestResult one_way_anova(const std::vector<std::vector<double>>& groups) {
  if (groups.size() < 2) throw Error("one_way_anova: need at least 2 groups");
  std::size_t n = 0;
  for (const auto& g : groups) {
    if (g.empty()) throw Error("one_way_anova: empty group");
    n += g.size();
  }
  if (n <= groups.size()) throw Error("one_way_anova: total n must exceed group count");

  // Structural degeneracy checks first so exactly-constant inputs are not
  // at the mercy of floating-point cancellation.
  bool within_constant = true;
  for (const auto& g : groups)
    if (!all_equal(g)) within_constant = false;
  if (within_constant) {
    bool all_same = true;
    for (const auto& g : groups)
      if (g.front() != groups.front().front()) all_same = false;
    TestResult r;
    r.df1 = static_cast<double>(groups.size() - 1);
    r.df2 = static_cast<double>(n - groups.size());
    if (all_same) {
      r.statistic = 0.0;
      r.p = 1.0;
    } else {
      r.statistic = kInf;
      r.p = 0.0;
    }
    return r;
  }

  double grand_sum = 0.0;
  for (const auto& g : groups)
    for (double x : g) grand_sum += x;
  const double grand_mean = grand_sum / static_cast<double>(n);

  double ss_between = 0.0, ss_within = 0.0;
  for (const auto& g : groups) {
    const double m = mean_of(g);
    ss_between += static_cast<double>(g.size()) * (m - grand_mean) * (m - grand_mean);
    for (double x : g) ss_within += (x - m) * (x - m);
  }
  return anova_from_ss(ss_between, ss_within, static_cast<double>(groups.size() - 1),
                       static_cast<double>(n - groups.size()));
}

TestResult one_way_anova_summary(std::span<const int> ns, std::span<const double> means,
                                 std::span<const double> sds) {
  if (ns.size() != means.size() || ns.size() != sds.size())
    throw Error("one_way_anova_summary: length mismatch");
  if (ns.size() < 2) throw Error("one_way_anova_summary: need at least 2 groups");
  long long n = 0;
  for (int ni : ns) {
    if (ni < 2) throw Error("one_way_anova_summary: group size < 2 (sd undefined)");
    n += ni;
  }

  double grand_sum = 0.0;
  for (std::size_t i = 0; i < ns.size(); ++i) grand_sum += ns[i] * means[i];
  const double grand_mean = grand_sum / static_cast<double>(n);

  double ss_between = 0.0, ss_within = 0.0;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    ss_between += ns[i] * (means[i] - grand_mean) * (means[i] - grand_mean);
    ss_within += (ns[i] - 1) * sds[i] * sds[i];
  }

  // Equal means make ss_between exactly 0 only in exact arithmetic; snap
  // negligible values so the F = 0 contract holds.
  bool means_equal = true;
  for (double m : means)
    if (m != means.front()) means_equal = false;
  if (means_equal) ss_between = 0.0;
  bool sds_zero = true;
  for (double s : sds)
    if (s != 0.0) sds_zero = false;
  if (sds_zero) ss_within = 0.0;

  return anova_from_ss(ss_between, ss_within, static_cast<double>(ns.size() - 1),
                       static_cast<double>(n - static_cast<long long>(ns.size())));
}

TestResult chi_square_independence(const std::vector<std::vector<long long>>& table) {
  const std::size_t r = table.size();
  if (r < 2) throw Error("chi_square_independence: need at least 2 rows");
  const std::size_t c = table.front().size();
  if (c < 2) throw Error("chi_square_independence: need at least 2 columns");
  for (const auto& row : table) {
    if (row.size() != c) throw Error("chi_square_independence: ragged table");
    for (long long v : row)
      if (v < 0) throw Error("chi_square_independence: negative count");
  }

  std::vector<long long> row_sum(r, 0), col_sum(c, 0);
  long long total = 0;
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) {
      row_sum[i] += table[i][j];
      col_sum[j] += table[i][j];
      total += table[i][j];
    }
  if (total == 0) throw Error("chi_square_independence: empty table");
  for (long long s : row_sum)
    if (s == 0) throw Error("chi_square_independence: degenerate table (all-zero row)");
  for (long long s : col_sum)
    if (s == 0) throw Error("chi_square_independence: degenerate table (all-zero column)");

  TestResult res;
  double stat = 0.0;
  bool low_expected = false;
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) {
      const double expected =
          static_cast<double>(row_sum[i]) * static_cast<double>(col_sum[j]) / static_cast<double>(total);
      if (expected < 5.0) low_expected = true;
      const double diff = static_cast<double>(table[i][j]) - expected;
      stat += diff * diff / expected;
    }
  res.statistic = stat;
  res.df1 = static_cast<double>((r - 1) * (c - 1));
  res.p = 1.0 - chi2_cdf(stat, res.df1);
  res.low_expected_counts = low_expected;
  return res;
}

double pearson_r(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw Error("pearson_r: length mismatch");
  if (x.size() < 2) throw Error("pearson_r: need at least 2 observations");
  if (all_equal(x) || all_equal(y)) throw Error("pearson_r: zero-variance input");

  const double mx = mean_of(x), my = mean_of(y);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx, dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw Error("pearson_r: zero-variance input");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

}  // namespace painscale::stats
