#include "scca/simulation.hpp"

#include <Eigen/Cholesky>
#include <Eigen/QR>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "scca/rng.hpp"

namespace scca {

CovFamily cov_family_from_string(const std::string& s) {
  if (s == "identity") return CovFamily::Identity;
  if (s == "toeplitz") return CovFamily::Toeplitz;
  if (s == "sparse_inverse") return CovFamily::SparseInverse;
  if (s == "spiked") return CovFamily::Spiked;
  if (s == "block_toeplitz") return CovFamily::BlockToeplitz;
  throw std::invalid_argument("unknown covariance family: " + s);
}

const char* cov_family_name(CovFamily f) {
  switch (f) {
    case CovFamily::Identity: return "identity";
    case CovFamily::Toeplitz: return "toeplitz";
    case CovFamily::SparseInverse: return "sparse_inverse";
    case CovFamily::Spiked: return "spiked";
    case CovFamily::BlockToeplitz: return "block_toeplitz";
  }
  return "unknown";
}

void ScenarioSpec::validate() const {
  if (n < 2) throw std::invalid_argument("scenario: n >= 2 required");
  if (p < 1 || q < 1) throw std::invalid_argument("scenario: p, q >= 1 required");
  if (s_u < 1 || s_u > p || s_v < 1 || s_v > q)
    throw std::invalid_argument("scenario: sparsity must satisfy 1 <= s_u <= p, 1 <= s_v <= q");
  if (!(rho > 0.0 && rho < 1.0)) throw std::invalid_argument("scenario: rho must lie in (0, 1)");
  switch (family) {
    case CovFamily::Toeplitz:
      if (toeplitz_base < 0.0 || toeplitz_base >= 1.0)
        throw std::invalid_argument("scenario: toeplitz base must lie in [0, 1)");
      break;
    case CovFamily::SparseInverse:
      if (p < 3 || q < 3) throw std::invalid_argument("scenario: sparse_inverse needs p, q >= 3");
      break;
    case CovFamily::Spiked:
      if (spiked_k < 1 || spiked_k > p || spiked_k > q)
        throw std::invalid_argument("scenario: spiked k must satisfy 1 <= k <= min(p, q)");
      if (spiked_lambda < 0.0) throw std::invalid_argument("scenario: spiked lambda must be >= 0");
      break;
    case CovFamily::BlockToeplitz:
      if (blocks < 1 || p % blocks != 0 || q % blocks != 0)
        throw std::invalid_argument("scenario: block count must divide p and q");
      if (block_base < 0.0 || block_base >= 1.0)
        throw std::invalid_argument("scenario: block base must lie in [0, 1)");
      if (5 * (s_u - 1) >= p || 5 * (s_v - 1) >= q)
        throw std::invalid_argument("scenario: fixed support pattern 1,6,11,... does not fit");
      break;
    case CovFamily::Identity:
      break;
  }
}

namespace {

// Positive definiteness gate: Cholesky of M - shift*I succeeds iff the
// smallest eigenvalue exceeds shift (up to roundoff).
void require_spd(const Matrix& M, const char* what, double shift = 1e-10) {
  Matrix S = M;
  S.diagonal().array() -= shift;
  Eigen::LLT<Matrix> llt(S);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error(std::string(what) + " is not positive definite");
}

std::vector<int> sample_indices(Rng& rng, int n, int s) {
  std::vector<int> idx(static_cast<std::size_t>(n));
  std::iota(idx.begin(), idx.end(), 0);
  for (int i = 0; i < s; ++i) {
    const auto j = i + static_cast<int>(rng.below(static_cast<std::uint64_t>(n - i)));
    std::swap(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(j)]);
  }
  idx.resize(static_cast<std::size_t>(s));
  std::sort(idx.begin(), idx.end());
  return idx;
}

Vector random_signed_support(Rng& rng, int dim, int s) {
  Vector u = Vector::Zero(dim);
  const auto idx = sample_indices(rng, dim, s);
  for (int i : idx) u[i] = rng.uniform() < 0.5 ? -1.0 : 1.0;
  return u;
}

// j = 1, 6, 11, ... (1-based), heights 1/sqrt(s).
Vector fixed_pattern_support(int dim, int s) {
  Vector u = Vector::Zero(dim);
  for (int i = 0; i < s; ++i) u[5 * i] = 1.0 / std::sqrt(static_cast<double>(s));
  return u;
}

Matrix family_cov(const ScenarioSpec& spec, int dim, std::uint64_t spike_seed) {
  switch (spec.family) {
    case CovFamily::Identity: return Matrix::Identity(dim, dim);
    case CovFamily::Toeplitz: return toeplitz_cov(dim, spec.toeplitz_base);
    case CovFamily::SparseInverse: return sparse_inverse_cov(dim);
    case CovFamily::Spiked:
      return spiked_cov(dim, spec.spiked_k, spec.spiked_lambda, spike_seed).first;
    case CovFamily::BlockToeplitz: return block_toeplitz_cov(dim, spec.blocks, spec.block_base);
  }
  throw std::logic_error("family_cov: unreachable");
}

Matrix joint_cov(const Matrix& Sx, const Matrix& Sy, const Matrix& Sxy) {
  const Eigen::Index p = Sx.rows(), q = Sy.rows();
  Matrix J(p + q, p + q);
  J.topLeftCorner(p, p) = Sx;
  J.topRightCorner(p, q) = Sxy;
  J.bottomLeftCorner(q, p) = Sxy.transpose();
  J.bottomRightCorner(q, q) = Sy;
  return J;
}

Dataset sample_gaussian(const Matrix& Sx, const Matrix& Sy, const Matrix& Sxy, int n,
                        std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("sample_joint: n >= 1 required");
  const Eigen::Index p = Sx.rows(), q = Sy.rows();
  const Matrix J = joint_cov(Sx, Sy, Sxy);
  Eigen::LLT<Matrix> llt(J);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("sample_joint: joint covariance is not positive definite");
  Rng rng(seed);
  const Matrix Z = rng.normal_matrix(n, p + q);
  const Matrix D = Z * Matrix(llt.matrixL()).transpose();
  Dataset ds;
  ds.X = D.leftCols(p);
  ds.Y = D.rightCols(q);
  ds.n = n;
  ds.p = p;
  ds.q = q;
  ds.centered = false;
  ds.scale_mode = ScaleMode::Raw;
  return ds;
}

}  // namespace

Matrix toeplitz_cov(int p, double base) {
  if (p < 1) throw std::invalid_argument("toeplitz_cov: p >= 1 required");
  if (base < 0.0 || base >= 1.0)
    throw std::invalid_argument("toeplitz_cov: base must lie in [0, 1)");
  Matrix S(p, p);
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < p; ++j) S(i, j) = std::pow(base, std::abs(i - j));
  return S;
}

Matrix sparse_inverse_cov(int p) {
  if (p < 3) throw std::invalid_argument("sparse_inverse_cov: p >= 3 required");
  Matrix Omega = Matrix::Identity(p, p);
  for (int i = 0; i + 1 < p; ++i) {
    Omega(i, i + 1) = 0.5;
    Omega(i + 1, i) = 0.5;
  }
  for (int i = 0; i + 2 < p; ++i) {
    Omega(i, i + 2) = 0.4;
    Omega(i + 2, i) = 0.4;
  }
  Eigen::LLT<Matrix> llt(Omega);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("sparse_inverse_cov: band precision matrix is not positive definite");
  Matrix S0 = llt.solve(Matrix::Identity(p, p));
  Vector d = S0.diagonal().cwiseSqrt();
  Matrix S(p, p);
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < p; ++j) S(i, j) = S0(i, j) / (d[i] * d[j]);
  return S;
}

std::pair<Matrix, Matrix> spiked_cov(int p, int k, double lam, std::uint64_t seed) {
  if (k < 1 || k > p) throw std::invalid_argument("spiked_cov: need 1 <= k <= p");
  if (lam < 0.0) throw std::invalid_argument("spiked_cov: lam must be >= 0");
  Rng rng(seed);
  const Matrix G = rng.normal_matrix(p, k);
  Eigen::HouseholderQR<Matrix> qr(G);
  Matrix W = qr.householderQ() * Matrix::Identity(p, k);
  Matrix S = lam * (W * W.transpose());
  S.diagonal().array() += 1.0;
  return {std::move(S), std::move(W)};
}

Matrix block_toeplitz_cov(int p, int blocks, double base) {
  if (blocks < 1 || p % blocks != 0)
    throw std::invalid_argument("block_toeplitz_cov: blocks must divide p");
  const int b = p / blocks;
  const Matrix T = toeplitz_cov(b, base);
  Matrix S = Matrix::Zero(p, p);
  for (int i = 0; i < blocks; ++i) S.block(i * b, i * b, b, b) = T;
  return S;
}

TruthSpec make_truth(const ScenarioSpec& spec) {
  spec.validate();
  TruthSpec t;
  t.rho = spec.rho;
  t.Sigma_x = family_cov(spec, spec.p, mix_seed(spec.seed, 1));
  t.Sigma_y = family_cov(spec, spec.q, mix_seed(spec.seed, 2));
  require_spd(t.Sigma_x, "Sigma_x");
  require_spd(t.Sigma_y, "Sigma_y");

  Rng rng(spec.seed);
  Vector u, v;
  if (spec.family == CovFamily::BlockToeplitz) {
    u = fixed_pattern_support(spec.p, spec.s_u);
    v = fixed_pattern_support(spec.q, spec.s_v);
  } else {
    u = random_signed_support(rng, spec.p, spec.s_u);
    v = random_signed_support(rng, spec.q, spec.s_v);
  }
  u /= std::sqrt(u.dot(t.Sigma_x * u));
  v /= std::sqrt(v.dot(t.Sigma_y * v));
  t.u_true = u;
  t.v_true = v;
  t.Sigma_xy = spec.rho * (t.Sigma_x * u) * (t.Sigma_y * v).transpose();
  require_spd(joint_cov(t.Sigma_x, t.Sigma_y, t.Sigma_xy), "joint covariance");
  return t;
}

Truth2Spec make_truth_rank2(int p, int q, int s, double rho1, double rho2, std::uint64_t seed) {
  if (s < 1 || 2 * s > p || 2 * s > q)
    throw std::invalid_argument("make_truth_rank2: need 1 <= s and 2s <= min(p, q)");
  if (!(rho1 > rho2 && rho2 > 0.0 && rho1 < 1.0))
    throw std::invalid_argument("make_truth_rank2: need 0 < rho2 < rho1 < 1");
  Truth2Spec t;
  t.rho1 = rho1;
  t.rho2 = rho2;
  t.Sigma_x = Matrix::Identity(p, p);
  t.Sigma_y = Matrix::Identity(q, q);

  Rng rng(seed);
  auto split_pair = [&rng, s](int dim) {
    const auto idx = sample_indices(rng, dim, 2 * s);
    Vector a = Vector::Zero(dim), b = Vector::Zero(dim);
    // alternate sorted indices between the two supports, signs drawn per entry
    for (int i = 0; i < 2 * s; ++i) {
      const double sign = rng.uniform() < 0.5 ? -1.0 : 1.0;
      (i % 2 == 0 ? a : b)[idx[static_cast<std::size_t>(i)]] = sign;
    }
    a /= a.norm();
    b /= b.norm();
    return std::make_pair(a, b);
  };
  std::tie(t.u1, t.u2) = split_pair(p);
  std::tie(t.v1, t.v2) = split_pair(q);
  t.Sigma_xy = rho1 * t.u1 * t.v1.transpose() + rho2 * t.u2 * t.v2.transpose();
  require_spd(joint_cov(t.Sigma_x, t.Sigma_y, t.Sigma_xy), "joint covariance");
  return t;
}

Dataset sample_joint(const TruthSpec& truth, int n, std::uint64_t seed) {
  return sample_gaussian(truth.Sigma_x, truth.Sigma_y, truth.Sigma_xy, n, seed);
}

Dataset sample_joint_rank2(const Truth2Spec& truth, int n, std::uint64_t seed) {
  return sample_gaussian(truth.Sigma_x, truth.Sigma_y, truth.Sigma_xy, n, seed);
}

Matrix special_case_sigma(const Matrix& U, const Matrix& V, const Vector& lambda) {
  const Eigen::Index p = U.rows(), q = V.rows(), k = U.cols();
  if (V.cols() != k || lambda.size() != k)
    throw std::invalid_argument("special_case_sigma: U, V, lambda must share k columns");
  const double du = (U.transpose() * U - Matrix::Identity(k, k)).cwiseAbs().maxCoeff();
  const double dv = (V.transpose() * V - Matrix::Identity(k, k)).cwiseAbs().maxCoeff();
  if (du > 1e-8 || dv > 1e-8)
    throw std::invalid_argument("special_case_sigma: U and V must have orthonormal columns");
  if (lambda.minCoeff() < 0.0 || lambda.maxCoeff() > 1.0)
    throw std::invalid_argument("special_case_sigma: lambda entries must lie in [0, 1]");
  Matrix S = Matrix::Identity(p + q, p + q);
  const Matrix C = U * lambda.asDiagonal() * V.transpose();
  S.topRightCorner(p, q) = C;
  S.bottomLeftCorner(q, p) = C.transpose();
  return S;
}

}  // namespace scca
