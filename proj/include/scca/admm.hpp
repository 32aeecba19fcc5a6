#pragma once

#include "scca/core.hpp"
#include "scca/linop.hpp"

namespace scca {

// Linearized ADMM for  min  tau*||u||_1 - c'u  s.t.  ||(Au)_ball|| <= 1,
// (Au)_tail = 0, where the ball covers the first A.ball_rows coordinates of Au.
//
// Updates, with scaled dual xi and step sizes mu (primal) and lambda (1/rho):
//   u <- prox_{mu f}(u - (mu/lambda) A'(Au - z + xi))
//   z <- project(Au + xi)
//   xi <- xi + Au - z
//
// Stops when max(primal, dual) residual <= cfg.inner_tol or after
// cfg.inner_max_iter iterations. With cfg.auto_step the primal step is
// mu = lambda / (1.05 * sigma_max(A))^2, which keeps the linearization a
// majorizer. Pass a previous AdmmState to warm start; zeros otherwise.
// Throws std::runtime_error on a non-finite iterate.
AdmmState solve_subproblem(const LinearOperator& A, const Vector& c, double tau,
                           const SolverConfig& cfg, const AdmmState& warm = AdmmState{});

// Audit of the stationarity system at (u, z, xi), independent of step sizes.
// Returns the max of
//   primal feasibility   ||Au - z||, plus ball/tail violations of z itself,
//   dual feasibility     min_{s >= 0} dist(c - s A'xi, tau * d||u||_1),
//   complementary slack  s_hat * ||xi_ball|| * max(0, 1 - ||z_ball||).
// The multiplier scale s is fitted because the state does not record lambda;
// at an exact solution s = 1/lambda attains zero so the minimum does too.
double kkt_residual(const LinearOperator& A, const Vector& c, double tau,
                    const Vector& u, const Vector& z, const Vector& xi);

}  // namespace scca
