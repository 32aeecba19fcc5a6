#include "scca/linop.hpp"

#include <cmath>

#include "scca/rng.hpp"

namespace scca {

double estimate_spectral_norm(const LinearOperator& A, int iters, std::uint64_t seed) {
  if (iters < 1) throw std::invalid_argument("estimate_spectral_norm: iters >= 1 required");
  Rng rng(seed);
  Vector b = rng.normal_vector(A.cols);
  const double b0 = b.norm();
  if (b0 == 0.0) return 0.0;
  b /= b0;
  Vector Ab(A.rows), AtAb(A.cols);
  double rayleigh = 0.0;
  for (int k = 0; k < iters; ++k) {
    A.apply(b, Ab);
    const double r = Ab.squaredNorm();  // b'A'Ab with ||b|| = 1
    if (r == 0.0) return 0.0;
    const double prev = rayleigh;
    rayleigh = r;
    A.apply_transpose(Ab, AtAb);
    const double nrm = AtAb.norm();
    if (nrm == 0.0) break;
    b = AtAb / nrm;
    if (k > 0 && std::abs(rayleigh - prev) <= 1e-14 * rayleigh) break;
  }
  return std::sqrt(rayleigh);
}

namespace {

constexpr int kNormIters = 200;
constexpr std::uint64_t kNormSeed = 20240901;

}  // namespace

LinearOperator make_operator(const Matrix& X) {
  LinearOperator A;
  A.rows = X.rows();
  A.cols = X.cols();
  A.ball_rows = X.rows();
  A.apply = [&X](const Vector& x, Vector& out) { out.noalias() = X * x; };
  A.apply_transpose = [&X](const Vector& y, Vector& out) { out.noalias() = X.transpose() * y; };
  A.spectral_norm_estimate = estimate_spectral_norm(A, kNormIters, kNormSeed);
  return A;
}

LinearOperator make_bridge_operator(const Matrix& X, double alpha) {
  if (alpha < 0.0 || alpha > 1.0)
    throw std::invalid_argument("make_bridge_operator: alpha must lie in [0,1]");
  if (alpha == 1.0) return make_operator(X);
  const Eigen::Index n = X.rows(), p = X.cols();
  const double wx = std::sqrt(alpha), wi = std::sqrt(1.0 - alpha);
  LinearOperator A;
  A.rows = n + p;
  A.cols = p;
  A.ball_rows = n + p;
  A.apply = [&X, n, p, wx, wi](const Vector& x, Vector& out) {
    out.resize(n + p);
    out.head(n).noalias() = wx * (X * x);
    out.tail(p) = wi * x;
  };
  A.apply_transpose = [&X, n, p, wx, wi](const Vector& y, Vector& out) {
    out.noalias() = wx * (X.transpose() * y.head(n));
    out += wi * y.tail(p);
  };
  A.spectral_norm_estimate = estimate_spectral_norm(A, kNormIters, kNormSeed);
  return A;
}

LinearOperator make_deflation_operator(const Matrix& X, const Matrix& B) {
  if (B.cols() != X.cols())
    throw std::invalid_argument("make_deflation_operator: B must have p columns");
  const Eigen::Index n = X.rows(), p = X.cols(), r = B.rows();
  LinearOperator A;
  A.rows = n + r;
  A.cols = p;
  A.ball_rows = n;
  A.apply = [&X, B, n, r](const Vector& x, Vector& out) {
    out.resize(n + r);
    out.head(n).noalias() = X * x;
    out.tail(r).noalias() = B * x;
  };
  A.apply_transpose = [&X, B, n, r](const Vector& y, Vector& out) {
    out.noalias() = X.transpose() * y.head(n);
    out.noalias() += B.transpose() * y.tail(r);
  };
  A.spectral_norm_estimate = estimate_spectral_norm(A, kNormIters, kNormSeed);
  return A;
}

LinearOperator make_bridge_deflation_operator(const Matrix& X, double alpha, const Matrix& B) {
  if (alpha == 1.0) return make_deflation_operator(X, B);
  if (alpha < 0.0 || alpha > 1.0)
    throw std::invalid_argument("make_bridge_deflation_operator: alpha must lie in [0,1]");
  if (B.cols() != X.cols())
    throw std::invalid_argument("make_bridge_deflation_operator: B must have p columns");
  const Eigen::Index n = X.rows(), p = X.cols(), r = B.rows();
  const double wx = std::sqrt(alpha), wi = std::sqrt(1.0 - alpha);
  LinearOperator A;
  A.rows = n + p + r;
  A.cols = p;
  A.ball_rows = n + p;
  A.apply = [&X, B, n, p, r, wx, wi](const Vector& x, Vector& out) {
    out.resize(n + p + r);
    out.head(n).noalias() = wx * (X * x);
    out.segment(n, p) = wi * x;
    out.tail(r).noalias() = B * x;
  };
  A.apply_transpose = [&X, B, n, p, r, wx, wi](const Vector& y, Vector& out) {
    out.noalias() = wx * (X.transpose() * y.head(n));
    out += wi * y.segment(n, p);
    out.noalias() += B.transpose() * y.tail(r);
  };
  A.spectral_norm_estimate = estimate_spectral_norm(A, kNormIters, kNormSeed);
  return A;
}

}  // namespace scca
