#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace scca {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// How raw data columns are rescaled after centering. With UnitVariance the
// centered matrix is divided by sqrt(n), so ||X u||_2^2 equals the biased
// (1/n) sample variance of the projection X u and the variance constraint
// Var(Xu) <= 1 coincides with the ball constraint ||Xu||_2 <= 1.
enum class ScaleMode { Raw, UnitVariance };

struct Dataset {
  Matrix X;  // n x p
  Matrix Y;  // n x q
  Eigen::Index n = 0, p = 0, q = 0;
  bool centered = false;
  ScaleMode scale_mode = ScaleMode::Raw;
};

// Regularizers and step/tolerance settings shared by the inner and outer
// solvers. With auto_step the primal step is derived per operator as
// mu = lambda / (1.05 * sigma_max)^2, which keeps mu * sigma_max^2 <= lambda.
struct SolverConfig {
  double tau_u = 0.0;
  double tau_v = 0.0;
  double mu = 0.1;        // primal prox step, used when auto_step is false
  double lambda = 1.0;    // ADMM parameter, lambda = 1/rho
  double alpha_x = 1.0;   // covariance bridge weights, 1 = sample-covariance ball
  double alpha_y = 1.0;
  double inner_tol = 1e-6;
  double outer_tol = 1e-5;
  int inner_max_iter = 5000;
  int outer_max_iter = 100;
  bool auto_step = true;

  void validate() const;
};

// Inner-solver state (u, z, xi) with residual history; passing a previous
// state back in warm-starts the next solve.
struct AdmmState {
  Vector u;
  Vector z;
  Vector xi;  // scaled dual, xi = phi * lambda
  int iter = 0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  std::vector<double> primal_history;
  std::vector<double> dual_history;

  bool empty() const { return u.size() == 0; }
};

struct CcaSolution {
  Vector u_hat;
  Vector v_hat;
  double sample_corr = 0.0;
  double l1_u = 0.0;
  double l1_v = 0.0;
  bool converged = false;
  bool zero_solution = false;
  int outer_iters = 0;
  std::vector<double> objective_history;
  // final inner-solver residuals of the last u- and v-subproblem
  double inner_primal_u = 0.0, inner_dual_u = 0.0;
  double inner_primal_v = 0.0, inner_dual_v = 0.0;
};

// Reads a rectangular CSV of finite reals ('.' decimal point, ',' separator).
// Errors carry 1-based file line and column indices.
Matrix load_csv(const std::string& path, bool has_header);

// Writes row-major CSV with round-trip precision; used by the CLI.
void write_csv(const std::string& path, const Matrix& m);

// Subtracts column means; with ScaleMode::UnitVariance also divides by
// sqrt(n). Constant columns center to zero.
Matrix center_scale(const Matrix& X, ScaleMode mode);

// Centers/scales both blocks and checks shape invariants (n >= 2, shared n).
Dataset make_dataset(const Matrix& X, const Matrix& Y, ScaleMode mode);

}  // namespace scca
