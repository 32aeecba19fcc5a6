#pragma once

#include <cstdint>
#include <functional>

#include "scca/core.hpp"

namespace scca {

// Matrix-free operator A together with its adjoint. Factories fill
// spectral_norm_estimate by power iteration so step sizes can be derived
// without touching A again. ball_rows marks how many leading rows of Au are
// subject to the unit-ball constraint; rows beyond that are equality rows
// pinned to zero (deflation).
struct LinearOperator {
  std::function<void(const Vector&, Vector&)> apply;            // out = A x
  std::function<void(const Vector&, Vector&)> apply_transpose;  // out = A' y
  Eigen::Index rows = 0;
  Eigen::Index cols = 0;
  Eigen::Index ball_rows = 0;
  double spectral_norm_estimate = 0.0;
};

// Power iteration on A'A from a seeded start. The returned value is the
// square root of the final Rayleigh quotient, a lower bound on sigma_max
// that increases monotonically with iters. A zero operator yields 0.
double estimate_spectral_norm(const LinearOperator& A, int iters, std::uint64_t seed);

// Plain dense operator. The matrix is captured by reference and must outlive
// the operator.
LinearOperator make_operator(const Matrix& X);

// A = [sqrt(alpha) X; sqrt(1-alpha) I_p], so ||Au||^2 = alpha*||Xu||^2 +
// (1-alpha)*||u||^2. alpha = 1 returns the plain operator on X unchanged.
LinearOperator make_bridge_operator(const Matrix& X, double alpha);

// A = [X; B] with B the (r-1) x p orthogonality rows (B = U'X'X); only the
// leading n rows carry the ball constraint. B is copied.
LinearOperator make_deflation_operator(const Matrix& X, const Matrix& B);

// Bridge and deflation combined: A = [sqrt(alpha) X; sqrt(1-alpha) I; B]
// with ball_rows = n + p.
LinearOperator make_bridge_deflation_operator(const Matrix& X, double alpha, const Matrix& B);

}  // namespace scca
