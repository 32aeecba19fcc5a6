#pragma once

#include <optional>

#include "scca/core.hpp"
#include "scca/simulation.hpp"

namespace scca {

// 2(1 - |<a, b>|) on internally l2-normalized inputs; 0 for matching
// directions regardless of sign, 2 for orthogonal ones. Throws on a zero
// vector (no direction to compare).
double loss(const Vector& v_hat, const Vector& v);

// min(||a - b||^2, ||a + b||^2) on normalized inputs; algebraically equal to
// loss(), kept as an independent cross-check.
double loss_min_form(const Vector& v_hat, const Vector& v);

// u'X'Yv / (||Xu|| ||Yv||). Throws when either projection is zero.
double sample_correlation(const Matrix& X, const Matrix& Y, const Vector& u, const Vector& v);

// Same ratio with the population matrices of `truth`.
double population_correlation(const TruthSpec& truth, const Vector& u, const Vector& v);

// One point of the correlation-vs-sparsity trade-off. l1 norms are taken
// after rescaling u by ||Xu|| and v by ||Yv|| so methods with different ball
// constraints share an axis; `scaled_l1_sum` falls back to the raw sum when
// a projection is zero. Zero solutions are flagged and excluded from
// frontiers rather than given fake coordinates.
struct ParetoPoint {
  double sample_corr = 0.0;
  double l1_sum = 0.0;         // ||u||_1 + ||v||_1 as returned by the solver
  double scaled_l1_sum = 0.0;  // after unit-projection rescaling
  std::optional<double> population_corr;
  bool degenerate = false;
};
ParetoPoint pareto_point(const CcaSolution& sol, const Matrix& X, const Matrix& Y,
                         const TruthSpec* truth = nullptr);

// F1 of {i : |u_hat_i| > tol} against {i : |u_true_i| > tol}. Throws when the
// true support is empty.
double support_f1(const Vector& u_hat, const Vector& u_true, double tol = 1e-6);

}  // namespace scca
