#include "scca/admm.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "scca/prox.hpp"

namespace scca {

namespace {

double effective_step(const LinearOperator& A, const SolverConfig& cfg) {
  if (!cfg.auto_step) return cfg.mu;
  double sigma = A.spectral_norm_estimate;
  if (sigma <= 0.0) sigma = estimate_spectral_norm(A, 200, 20240901);
  if (sigma <= 0.0) return cfg.lambda;  // zero operator, constraint is vacuous
  const double s = 1.05 * sigma;
  return cfg.lambda / (s * s);
}

Vector project_split(const Vector& z_arg, const LinearOperator& A) {
  if (A.ball_rows == A.rows) return prox_g(z_arg);
  return prox_g_augmented(z_arg, A.ball_rows);
}

}  // namespace

AdmmState solve_subproblem(const LinearOperator& A, const Vector& c, double tau,
                           const SolverConfig& cfg, const AdmmState& warm) {
  if (A.cols != c.size())
    throw std::invalid_argument("solve_subproblem: cols(A) must equal length(c)");
  if (tau < 0.0) throw std::invalid_argument("solve_subproblem: tau must be nonnegative");
  cfg.validate();

  const Eigen::Index p = A.cols, m = A.rows;
  const double mu = effective_step(A, cfg);
  const double lambda = cfg.lambda;

  AdmmState st;
  if (!warm.empty()) {
    if (warm.u.size() != p || warm.z.size() != m || warm.xi.size() != m)
      throw std::invalid_argument("solve_subproblem: warm state has wrong shape");
    st.u = warm.u;
    st.z = warm.z;
    st.xi = warm.xi;
  } else {
    st.u = Vector::Zero(p);
    st.z = Vector::Zero(m);
    st.xi = Vector::Zero(m);
  }
  st.primal_history.reserve(64);
  st.dual_history.reserve(64);

  ProxFParams fp;
  fp.c = c;
  fp.mu = mu;
  fp.tau = tau;

  Vector Au(m), w(m), Atw(p), u_new(p), Au_new(m), z_new(m), dvec(m), d(p);
  A.apply(st.u, Au);

  for (int k = 1; k <= cfg.inner_max_iter; ++k) {
    // u-step: gradient of the linearized quadratic, then prox of tau|.|_1 - c'.
    w = Au - st.z + st.xi;
    A.apply_transpose(w, Atw);
    u_new = prox_f(st.u - (mu / lambda) * Atw, fp);
    A.apply(u_new, Au_new);

    // z-step and dual ascent.
    z_new = project_split(Au_new + st.xi, A);
    st.xi += Au_new - z_new;

    const double primal = (Au_new - z_new).norm();
    // d = (1/mu) du + (1/lambda) A'(dz - dAu), the exact stationarity gap of
    // the u-update against the fixed-point system.
    dvec = (z_new - st.z) - (Au_new - Au);
    A.apply_transpose(dvec, d);
    d = d / lambda + (u_new - st.u) / mu;
    const double dual = d.norm();

    st.u.swap(u_new);
    Au.swap(Au_new);
    st.z.swap(z_new);
    st.iter = k;
    st.primal_residual = primal;
    st.dual_residual = dual;
    st.primal_history.push_back(primal);
    st.dual_history.push_back(dual);

    if (!std::isfinite(primal) || !std::isfinite(dual) || !st.u.allFinite())
      throw std::runtime_error("solve_subproblem: non-finite iterate at inner iteration " +
                               std::to_string(k));
    if (std::max(primal, dual) <= cfg.inner_tol) break;
  }
  return st;
}

namespace {

// Distance of c - s*g from the subdifferential tau * d||u||_1, as a function
// of the multiplier scale s. Convex piecewise-smooth in s.
double dual_violation(const Vector& c, const Vector& g, double tau, const Vector& u, double s) {
  double sq = 0.0;
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    const double r = c[i] - s * g[i];
    if (u[i] != 0.0) {
      const double e = r - tau * (u[i] > 0.0 ? 1.0 : -1.0);
      sq += e * e;
    } else {
      const double e = std::max(0.0, std::abs(r) - tau);
      sq += e * e;
    }
  }
  return std::sqrt(sq);
}

}  // namespace

double kkt_residual(const LinearOperator& A, const Vector& c, double tau,
                    const Vector& u, const Vector& z, const Vector& xi) {
  if (A.cols != c.size() || u.size() != c.size() || z.size() != A.rows || xi.size() != A.rows)
    throw std::invalid_argument("kkt_residual: inconsistent shapes");
  const Eigen::Index nb = A.ball_rows > 0 ? A.ball_rows : A.rows;

  Vector Au(A.rows);
  A.apply(u, Au);
  const double z_ball = z.head(nb).norm();
  double primal = (Au - z).norm();
  primal = std::max(primal, std::max(0.0, z_ball - 1.0));
  if (nb < A.rows) primal = std::max(primal, z.tail(A.rows - nb).norm());

  Vector g(A.cols);
  A.apply_transpose(xi, g);

  // Fit the multiplier scale: least-squares seed on the support, then expand
  // the bracket until the convex violation turns upward, then ternary search.
  double s_seed = 0.0;
  double gs_sq = 0.0, gs_dot = 0.0;
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    if (u[i] != 0.0) {
      gs_sq += g[i] * g[i];
      gs_dot += g[i] * (c[i] - tau * (u[i] > 0.0 ? 1.0 : -1.0));
    }
  }
  if (gs_sq > 0.0) s_seed = std::max(0.0, gs_dot / gs_sq);
  double hi = std::max(1.0, 2.0 * s_seed);
  for (int k = 0; k < 60; ++k) {
    if (dual_violation(c, g, tau, u, 2.0 * hi) >= dual_violation(c, g, tau, u, hi)) break;
    hi *= 2.0;
  }
  double lo = 0.0;
  for (int k = 0; k < 200; ++k) {
    const double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
    if (dual_violation(c, g, tau, u, m1) <= dual_violation(c, g, tau, u, m2))
      hi = m2;
    else
      lo = m1;
  }
  const double s_hat = 0.5 * (lo + hi);
  const double dual = dual_violation(c, g, tau, u, s_hat);

  const double comp = s_hat * xi.head(nb).norm() * std::max(0.0, 1.0 - z_ball);

  return std::max(primal, std::max(dual, comp));
}

}  // namespace scca
