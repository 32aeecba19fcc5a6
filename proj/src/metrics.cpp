#include "scca/metrics.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace scca {

namespace {

Vector unit_or_throw(const Vector& v, const char* what) {
  const double n = v.norm();
  if (n == 0.0) throw std::invalid_argument(std::string(what) + ": zero vector has no direction");
  return v / n;
}

}  // namespace

double loss(const Vector& v_hat, const Vector& v) {
  if (v_hat.size() != v.size()) throw std::invalid_argument("loss: length mismatch");
  const Vector a = unit_or_throw(v_hat, "loss");
  const Vector b = unit_or_throw(v, "loss");
  return 2.0 * (1.0 - std::abs(a.dot(b)));
}

double loss_min_form(const Vector& v_hat, const Vector& v) {
  if (v_hat.size() != v.size()) throw std::invalid_argument("loss: length mismatch");
  const Vector a = unit_or_throw(v_hat, "loss");
  const Vector b = unit_or_throw(v, "loss");
  return std::min((a - b).squaredNorm(), (a + b).squaredNorm());
}

double sample_correlation(const Matrix& X, const Matrix& Y, const Vector& u, const Vector& v) {
  if (X.cols() != u.size() || Y.cols() != v.size() || X.rows() != Y.rows())
    throw std::invalid_argument("sample_correlation: shape mismatch");
  const Vector xu = X * u;
  const Vector yv = Y * v;
  const double nx = xu.norm(), ny = yv.norm();
  if (nx == 0.0 || ny == 0.0)
    throw std::invalid_argument("sample_correlation: zero projection");
  return xu.dot(yv) / (nx * ny);
}

double population_correlation(const TruthSpec& truth, const Vector& u, const Vector& v) {
  if (truth.Sigma_x.cols() != u.size() || truth.Sigma_y.cols() != v.size())
    throw std::invalid_argument("population_correlation: shape mismatch");
  const double vx = u.dot(truth.Sigma_x * u);
  const double vy = v.dot(truth.Sigma_y * v);
  if (vx <= 0.0 || vy <= 0.0)
    throw std::invalid_argument("population_correlation: zero variance direction");
  return u.dot(truth.Sigma_xy * v) / std::sqrt(vx * vy);
}

ParetoPoint pareto_point(const CcaSolution& sol, const Matrix& X, const Matrix& Y,
                         const TruthSpec* truth) {
  ParetoPoint pt;
  pt.l1_sum = sol.l1_u + sol.l1_v;
  const double nu = sol.u_hat.norm(), nv = sol.v_hat.norm();
  if (sol.zero_solution || nu == 0.0 || nv == 0.0) {
    pt.degenerate = true;
    pt.scaled_l1_sum = pt.l1_sum;
    return pt;
  }
  pt.sample_corr = sol.sample_corr;
  const double nx = (X * sol.u_hat).norm();
  const double ny = (Y * sol.v_hat).norm();
  pt.scaled_l1_sum = (nx > 0.0 ? sol.l1_u / nx : sol.l1_u) + (ny > 0.0 ? sol.l1_v / ny : sol.l1_v);
  if (truth) pt.population_corr = population_correlation(*truth, sol.u_hat, sol.v_hat);
  return pt;
}

double support_f1(const Vector& u_hat, const Vector& u_true, double tol) {
  if (u_hat.size() != u_true.size()) throw std::invalid_argument("support_f1: length mismatch");
  if (tol < 0.0) throw std::invalid_argument("support_f1: tol must be >= 0");
  int tp = 0, fp = 0, fn = 0;
  for (Eigen::Index i = 0; i < u_hat.size(); ++i) {
    const bool est = std::abs(u_hat[i]) > tol;
    const bool tru = std::abs(u_true[i]) > tol;
    tp += est && tru;
    fp += est && !tru;
    fn += !est && tru;
  }
  if (tp + fn == 0) throw std::invalid_argument("support_f1: empty true support");
  if (tp == 0) return 0.0;
  return 2.0 * tp / (2.0 * tp + fp + fn);
}

}  // namespace scca
