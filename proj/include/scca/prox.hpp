#pragma once

#include <stdexcept>

#include "scca/core.hpp"

namespace scca {

// Parameters of f(u) = tau*||u||_1 - c'u, the separable part handled by the
// u-step. c is the gradient of the smooth coupling term (c = X'Yv when
// solving for u).
struct ProxFParams {
  Vector c;
  double mu = 0.0;
  double tau = 0.0;
};

inline double soft_threshold(double x, double t) {
  if (x > t) return x - t;
  if (x < -t) return x + t;
  return 0.0;
}

// prox_{mu f}(x): elementwise soft-threshold of x + mu*c at level mu*tau.
// Minimizes mu*(tau*||u||_1 - c'u) + 0.5*||u - x||_2^2.
inline Vector prox_f(const Vector& x, const ProxFParams& params) {
  if (x.size() != params.c.size())
    throw std::invalid_argument("prox_f: dimension mismatch between x and c");
  const double level = params.mu * params.tau;
  Vector out(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i)
    out[i] = soft_threshold(x[i] + params.mu * params.c[i], level);
  return out;
}

// prox_{lambda g}(z) for g the indicator of the unit l2 ball: radial
// projection, independent of lambda.
inline Vector prox_g(const Vector& z) {
  const double norm = z.norm();
  if (norm <= 1.0) return z;
  return z / norm;
}

// Product projection for the augmented split variable of deflation: the
// leading n_ball coordinates are projected onto the unit ball, the trailing
// ones (the orthogonality rows) are pinned to zero.
inline Vector prox_g_augmented(const Vector& z, Eigen::Index n_ball) {
  if (n_ball > z.size())
    throw std::invalid_argument("prox_g_augmented: n_ball exceeds length of z");
  Vector out = Vector::Zero(z.size());
  const double norm = z.head(n_ball).norm();
  if (norm <= 1.0)
    out.head(n_ball) = z.head(n_ball);
  else
    out.head(n_ball) = z.head(n_ball) / norm;
  return out;
}

}  // namespace scca
