#pragma once

#include <cstdint>
#include <utility>

#include "scca/core.hpp"

namespace scca {

enum class CovFamily { Identity, Toeplitz, SparseInverse, Spiked, BlockToeplitz };

CovFamily cov_family_from_string(const std::string& s);
const char* cov_family_name(CovFamily f);

struct ScenarioSpec {
  CovFamily family = CovFamily::Identity;
  int n = 0;
  int p = 0;
  int q = 0;
  int s_u = 0;
  int s_v = 0;
  double rho = 0.0;
  std::uint64_t seed = 0;

  double toeplitz_base = 0.9;
  int spiked_k = 20;
  double spiked_lambda = 250.0;
  int blocks = 5;
  double block_base = 0.7;

  void validate() const;
};

// Ground truth of the rank-1 model: Sigma_xy = rho * Sigma_x u v' Sigma_y,
// with u' Sigma_x u = v' Sigma_y v = 1 so the population canonical
// correlation equals rho.
struct TruthSpec {
  Vector u_true;
  Vector v_true;
  Matrix Sigma_x;
  Matrix Sigma_y;
  Matrix Sigma_xy;
  double rho = 0.0;
};

// Two orthogonal pairs with disjoint supports (identity family only), for
// exercising the deflated second solve.
struct Truth2Spec {
  Vector u1, u2, v1, v2;
  Matrix Sigma_x, Sigma_y, Sigma_xy;
  double rho1 = 0.0, rho2 = 0.0;
};

Matrix toeplitz_cov(int p, double base);

// Correlation matrix whose inverse is the band matrix
// omega_ij = 1{i=j} + 0.5*1{|i-j|=1} + 0.4*1{|i-j|=2}.
Matrix sparse_inverse_cov(int p);

// lam * W W' + I with W a seeded random orthonormal p x k basis.
std::pair<Matrix, Matrix> spiked_cov(int p, int k, double lam, std::uint64_t seed);

Matrix block_toeplitz_cov(int p, int blocks, double base);

TruthSpec make_truth(const ScenarioSpec& spec);

Truth2Spec make_truth_rank2(int p, int q, int s, double rho1, double rho2, std::uint64_t seed);

// n rows drawn from N(0, [[Sx, Sxy], [Sxy', Sy]]), split into X and Y.
// Raw draws: centering and scaling are the caller's choice.
Dataset sample_joint(const TruthSpec& truth, int n, std::uint64_t seed);
Dataset sample_joint_rank2(const Truth2Spec& truth, int n, std::uint64_t seed);

// [[I, U L V'], [V L U', I]] for orthonormal U, V and 0 <= L_ii <= 1; its
// spectrum is {1 + L_ii} u {1 - L_ii} u {1}, with eigenvectors
// (U_i; +/- V_i)/sqrt(2).
Matrix special_case_sigma(const Matrix& U, const Matrix& V, const Vector& lambda);

}  // namespace scca
