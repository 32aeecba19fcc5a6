#include "scca/baselines.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <tuple>

#include "scca/prox.hpp"
#include "scca/solver.hpp"

namespace scca {

namespace {

// Inverse square root of a symmetric PSD matrix through its eigensystem.
// With ridge = 0, eigenvalues at or below the relative cutoff mean the
// whitening transform does not exist.
Matrix inverse_sqrt(const Matrix& G, double ridge, const char* what) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(G);
  if (es.info() != Eigen::Success)
    throw std::runtime_error(std::string("classical_cca: eigensolver failed on ") + what);
  const Vector& ev = es.eigenvalues();
  const double cutoff = 1e-12 * std::max(1.0, ev.cwiseAbs().maxCoeff());
  Vector inv(ev.size());
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    const double l = ev[i] + ridge;
    if (l <= cutoff)
      throw std::invalid_argument(std::string("classical_cca: singular Gram matrix for ") + what +
                                  "; a positive ridge is required");
    inv[i] = 1.0 / std::sqrt(l);
  }
  return es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().transpose();
}

}  // namespace

std::vector<CanonicalTriple> classical_cca(const Matrix& X, const Matrix& Y, int k, double ridge) {
  if (X.rows() != Y.rows()) throw std::invalid_argument("classical_cca: X, Y row counts differ");
  if (k < 1) throw std::invalid_argument("classical_cca: k >= 1 required");
  if (ridge < 0.0) throw std::invalid_argument("classical_cca: ridge must be nonnegative");
  const Eigen::Index p = X.cols(), q = Y.cols();
  k = static_cast<int>(std::min<Eigen::Index>(k, std::min(p, q)));

  const Matrix Wx = inverse_sqrt(X.transpose() * X, ridge, "X'X");
  const Matrix Wy = inverse_sqrt(Y.transpose() * Y, ridge, "Y'Y");
  const Matrix M = Wx * (X.transpose() * Y) * Wy;

  Eigen::BDCSVD<Matrix> svd(M, Eigen::ComputeThinU | Eigen::ComputeThinV);
  std::vector<CanonicalTriple> out;
  out.reserve(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) {
    CanonicalTriple t;
    t.u = Wx * svd.matrixU().col(i);
    t.v = Wy * svd.matrixV().col(i);
    t.rho = svd.singularValues()[i];
    out.push_back(std::move(t));
  }
  return out;
}

PmaCore pma_iterate(const Matrix& C, double tau_u, double tau_v, int max_iter, const Vector& v0) {
  if (v0.size() != C.cols()) throw std::invalid_argument("pma_iterate: v0 has wrong length");
  if (tau_u < 0.0 || tau_v < 0.0) throw std::invalid_argument("pma_iterate: taus must be >= 0");
  if (max_iter < 1) throw std::invalid_argument("pma_iterate: max_iter >= 1 required");

  PmaCore r;
  r.u = Vector::Zero(C.rows());
  r.v = v0;
  const double nv0 = r.v.norm();
  if (nv0 > 0.0) r.v /= nv0;

  Vector u_prev = r.u, v_prev = r.v;
  for (int k = 1; k <= max_iter; ++k) {
    r.iters = k;
    Vector su = (C * r.v).unaryExpr([tau_u](double x) { return soft_threshold(x, tau_u); });
    const double nu = su.norm();
    if (nu == 0.0) {
      r.u.setZero();
      r.v.setZero();
      r.zero = true;
      r.converged = true;
      return r;
    }
    r.u = su / nu;

    Vector sv = (C.transpose() * r.u).unaryExpr([tau_v](double x) { return soft_threshold(x, tau_v); });
    const double nv = sv.norm();
    if (nv == 0.0) {
      r.u.setZero();
      r.v.setZero();
      r.zero = true;
      r.converged = true;
      return r;
    }
    r.v = sv / nv;

    const double change = std::max((r.u - u_prev).lpNorm<Eigen::Infinity>(),
                                   (r.v - v_prev).lpNorm<Eigen::Infinity>());
    if (change <= 1e-8) {
      r.converged = true;
      return r;
    }
    u_prev = r.u;
    v_prev = r.v;
  }
  return r;
}

CcaSolution pma_cca(const Matrix& X, const Matrix& Y, double tau_u, double tau_v, int max_iter) {
  if (X.rows() != Y.rows()) throw std::invalid_argument("pma_cca: X, Y row counts differ");
  const Matrix C = X.transpose() * Y;
  Eigen::BDCSVD<Matrix> svd(C, Eigen::ComputeThinV);
  const Vector v0 = svd.matrixV().col(0);
  PmaCore core = pma_iterate(C, tau_u, tau_v, max_iter, v0);

  CcaSolution sol;
  // same output convention as the alternating solver
  std::tie(sol.u_hat, sol.v_hat) = fix_sign(std::move(core.u), std::move(core.v));
  sol.converged = core.converged;
  sol.zero_solution = core.zero;
  sol.outer_iters = core.iters;
  sol.l1_u = sol.u_hat.lpNorm<1>();
  sol.l1_v = sol.v_hat.lpNorm<1>();
  const Vector xu = X * sol.u_hat;
  const Vector yv = Y * sol.v_hat;
  const double nx = xu.norm(), ny = yv.norm();
  sol.sample_corr = (nx > 0.0 && ny > 0.0) ? xu.dot(yv) / (nx * ny) : 0.0;
  return sol;
}

}  // namespace scca
