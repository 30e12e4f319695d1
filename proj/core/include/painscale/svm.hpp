#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "painscale/matrix.hpp"
#include "painscale/types.hpp"

namespace painscale::models {

struct SvmParams {
  double C = 1.0;
  /// Kernel width; unset means "scale": 1 / (n_features * var(X)) with the
  /// variance taken over all entries of the full training matrix.
  std::optional<double> gamma;
  double tol = 1e-3;  // KKT violation stopping threshold
  std::uint64_t seed = 0;  // reserved; the maximal-violating-pair solver is deterministic
};

/// One binary soft-margin SVM of the one-vs-one decomposition.
/// decision(x) = sum_i dual_coef[i] * K(sv_i, x) + bias; >= 0 votes for
/// `positive` (the canonically smaller class of the pair).
struct BinarySvm {
  PainClass positive = PainClass::Mild;
  PainClass negative = PainClass::Moderate;
  Matrix support_vectors;
  std::vector<double> dual_coef;  // alpha_i * y_i, |coef| <= C
  double bias = 0.0;
  // solver diagnostics
  double kkt_violation = 0.0;   // m(alpha) - M(alpha) at termination
  double dual_objective = 0.0;  // 0.5 a'Qa - e'a at termination (minimization form)
};

struct SvmModel {
  std::vector<BinarySvm> pairs;
  double gamma = 0.0;
  double C = 1.0;
};

/// RBF kernel exp(-gamma * ||u - v||^2).
double rbf_kernel(std::span<const double> u, std::span<const double> v, double gamma);

/// Fits pairwise SMO duals to KKT violation <= params.tol. Throws when only
/// one class is present or when "scale" gamma is degenerate (zero-variance X).
SvmModel svm_fit(const Matrix& x, std::span<const PainClass> y, const SvmParams& params = {});

PainClass svm_predict_one(const SvmModel& model, std::span<const double> row);
std::vector<PainClass> svm_predict(const SvmModel& model, const Matrix& x);

}  // namespace painscale::models
