#pragma once

#include <vector>

#include "scca/core.hpp"

namespace scca {

struct CanonicalTriple {
  Vector u;
  Vector v;
  double rho = 0.0;
};

// Classical CCA as a whitened SVD: the top-k singular triplets of
// (X'X + ridge I)^{-1/2} (X'Y) (Y'Y + ridge I)^{-1/2}, back-transformed into
// the original coordinates. Requires ridge > 0 when either Gram matrix is
// rank-deficient (p > n or q > n).
std::vector<CanonicalTriple> classical_cca(const Matrix& X, const Matrix& Y, int k,
                                           double ridge = 0.0);

// Bare alternating loop for the identity-relaxed problem:
//   u <- S(Cv, tau_u) / ||S(Cv, tau_u)||_2,  then symmetrically for v,
// starting from v0, until the sup-norm change drops below 1e-8 or max_iter.
// Exposed separately so grid sweeps can reuse a precomputed C = X'Y and warm
// start v0 from the previous grid point.
struct PmaCore {
  Vector u;
  Vector v;
  int iters = 0;
  bool converged = false;
  bool zero = false;
};
PmaCore pma_iterate(const Matrix& C, double tau_u, double tau_v, int max_iter, const Vector& v0);

// Identity-relaxation alternating method (unit l2 balls instead of sample
// variance balls). Starts from the leading right singular vector of X'Y, so
// tau = 0 reproduces the leading singular pair.
CcaSolution pma_cca(const Matrix& X, const Matrix& Y, double tau_u, double tau_v,
                    int max_iter = 1000);

}  // namespace scca
