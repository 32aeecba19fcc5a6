#pragma once

#include <optional>
#include <utility>

#include "scca/admm.hpp"
#include "scca/core.hpp"
#include "scca/linop.hpp"

namespace scca {

// Prior pairs whose directions the next solve must avoid: the r-th solve is
// constrained by U_prev' X'X u = 0 and V_prev' Y'Y v = 0.
struct DeflationContext {
  Matrix U_prev;  // p x (r-1)
  Matrix V_prev;  // q x (r-1)
  int r = 2;

  void validate(Eigen::Index p, Eigen::Index q) const;
};

// Threshold for the default initialization: the (1 - 10/(p*q))-quantile of
// |X'Y| entries, so roughly the ten strongest entries survive. The second
// form takes a precomputed cross matrix C = X'Y.
double default_init_threshold(const Matrix& X, const Matrix& Y);
double default_init_threshold_from_cross(const Matrix& C);

// Denoising initialization: soft-threshold X'Y elementwise, take its SVD,
// rescale each singular vector pair to unit sample variance, and return the
// pair with the `order`-th largest rescaled cross-covariance (order 1 = best;
// used with order = r when seeding the r-th deflated solve). Columns whose
// variance normalizer falls below 1e-12 are skipped; if none survive, falls
// back to the leading singular pair of the unthresholded X'Y.
std::pair<Vector, Vector> initialize(const Matrix& X, const Matrix& Y, double threshold,
                                     int order = 1);

// Constraint operator realizing ||Au||^2 = alpha ||Xu||^2 + (1-alpha) ||u||^2.
// p must equal cols(X); present for interface symmetry.
LinearOperator bridge_operator(const Matrix& X, double alpha, Eigen::Index p);

// Joint sign convention: flip both vectors when the largest-magnitude entry
// of u is negative (ties to the lowest index; u = 0 never flips).
std::pair<Vector, Vector> fix_sign(Vector u, Vector v);

// Reusable solve state for one dataset: caches the cross matrix X'Y, the two
// constraint operators, and the last ADMM states so that consecutive solves
// (e.g. along a tau grid) warm start. The Dataset must outlive the context.
class PairContext {
 public:
  PairContext(const Dataset& data, double alpha_x, double alpha_y);
  PairContext(const Dataset& data, const DeflationContext& ctx, double alpha_x, double alpha_y);

  // One full alternating solve. With `init` given, starts there; otherwise
  // continues from the previous solve's state when present. A cold solve with
  // neither tries the default initialization threshold plus a short ladder of
  // coarser ones and keeps the lowest penalized objective (an explicit
  // init_threshold disables the ladder).
  CcaSolution solve(const SolverConfig& cfg,
                    const std::optional<std::pair<Vector, Vector>>& init = std::nullopt);

  void reset();
  bool has_warm() const { return !warm_u_.empty() && !warm_v_.empty(); }
  const Matrix& cross() const { return C_; }

  // The default initialization pair this context would use, computed from the
  // cached cross matrix (threshold resolves like solve()'s internal path).
  std::pair<Vector, Vector> compute_init() const;

  // Explicit threshold for the default initialization (auto-quantile if unset).
  std::optional<double> init_threshold;

 private:
  CcaSolution solve_core(const SolverConfig& cfg,
                         const std::optional<std::pair<Vector, Vector>>& init);

  const Dataset* data_;
  int order_ = 1;
  Matrix Bx_, By_;  // deflation rows, empty for the first pair
  LinearOperator Ax_, Ay_;
  Matrix C_;
  AdmmState warm_u_, warm_v_;
};

// Alternating biconvex solve for the leading sparse pair.
CcaSolution solve_first_pair(const Dataset& data, const SolverConfig& cfg,
                             const std::optional<std::pair<Vector, Vector>>& init = std::nullopt);

// Same alternation on the augmented operators that pin prior directions to
// zero; the result satisfies |U_prev' X'X u_r| <= 1e-5 coordinatewise.
CcaSolution solve_rth_pair(const Dataset& data, const DeflationContext& ctx,
                           const SolverConfig& cfg);

}  // namespace scca
