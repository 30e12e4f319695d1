#pragma once

#include <span>
#include <vector>

namespace painscale::stats {

/// Result of a hypothesis test. df2 stays 0 for tests with a single
/// degrees-of-freedom parameter. `low_expected_counts` is the chi-square
/// small-cell warning; it never blocks the computation.
struct TestResult {
  double statistic = 0.0;
  double df1 = 0.0;
  double df2 = 0.0;
  double p = 1.0;
  bool low_expected_counts = false;

  bool operator==(const TestResult&) const = default;
};

/// One-way ANOVA over raw groups. Degenerate inputs keep the screening
/// pipeline total: zero within-group variance with distinct means gives
/// F = +inf / p = 0, and fully constant input gives F = 0 / p = 1.
TestResult one_way_anova(const std::vector<std::vector<double>>& groups);

/// One-way ANOVA reconstructed from per-group (n, mean, sd) summaries.
/// Requires every n_i >= 2 (sd is undefined below that).
TestResult one_way_anova_summary(std::span<const int> ns, std::span<const double> means,
                                 std::span<const double> sds);

/// Pearson chi-square test of independence on an r x c count table
/// (r, c >= 2). No continuity correction. Throws on all-zero rows/columns.
TestResult chi_square_independence(const std::vector<std::vector<long long>>& table);

/// Sample correlation coefficient. Throws when either input is constant.
double pearson_r(std::span<const double> x, std::span<const double> y);

/// CDFs used to turn test statistics into p-values. Absolute error of the
/// underlying incomplete-beta/gamma evaluations is well under 1e-10.
double f_cdf(double x, double df1, double df2);
double chi2_cdf(double x, double df);

// Special functions backing the CDFs (exposed for the oracle tests).
double regularized_incomplete_beta(double x, double a, double b);
double regularized_lower_incomplete_gamma(double a, double x);

}  // namespace painscale::stats
