#include "scca/solver.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "scca/prox.hpp"

namespace scca {

void DeflationContext::validate(Eigen::Index p, Eigen::Index q) const {
  if (r < 2) throw std::invalid_argument("DeflationContext: r >= 2 required");
  if (U_prev.rows() != p || V_prev.rows() != q)
    throw std::invalid_argument("DeflationContext: U_prev/V_prev row counts must match p, q");
  if (U_prev.cols() != r - 1 || V_prev.cols() != r - 1)
    throw std::invalid_argument("DeflationContext: expected r-1 columns");
}

double default_init_threshold(const Matrix& X, const Matrix& Y) {
  return default_init_threshold_from_cross(X.transpose() * Y);
}

double default_init_threshold_from_cross(const Matrix& C) {
  const auto N = static_cast<std::size_t>(C.size());
  std::vector<double> a(N);
  for (std::size_t i = 0; i < N; ++i) a[i] = std::abs(C.data()[i]);
  auto idx = static_cast<std::ptrdiff_t>(std::floor((1.0 - 10.0 / static_cast<double>(N)) *
                                                    static_cast<double>(N)));
  idx = std::clamp<std::ptrdiff_t>(idx, 0, static_cast<std::ptrdiff_t>(N) - 1);
  std::nth_element(a.begin(), a.begin() + idx, a.end());
  return a[static_cast<std::size_t>(idx)];
}

namespace {

std::pair<Vector, Vector> initialize_with_cross(const Matrix& X, const Matrix& Y, const Matrix& C,
                                                double threshold, int order) {
  if (threshold < 0.0) throw std::invalid_argument("initialize: threshold must be nonnegative");
  if (order < 1) throw std::invalid_argument("initialize: order must be >= 1");

  Matrix S = C.unaryExpr([threshold](double x) { return soft_threshold(x, threshold); });

  const bool all_zero = (S.lpNorm<Eigen::Infinity>() == 0.0);
  Eigen::BDCSVD<Matrix> svd;
  if (!all_zero)
    svd.compute(S, Eigen::ComputeThinU | Eigen::ComputeThinV);

  if (!all_zero) {
    const Matrix& U = svd.matrixU();
    const Matrix& V = svd.matrixV();
    const Eigen::Index k = U.cols();
    Matrix XU = X * U;  // n x k
    Matrix YV = Y * V;
    Matrix CV = C * V;  // p x k, for the rescaled cross-covariances

    struct Cand {
      double d;
      Eigen::Index i;
      double du, dv;
    };
    std::vector<Cand> cands;
    cands.reserve(static_cast<std::size_t>(k));
    for (Eigen::Index i = 0; i < k; ++i) {
      const double du = XU.col(i).norm();
      const double dv = YV.col(i).norm();
      if (du <= 1e-12 || dv <= 1e-12) continue;
      const double d = U.col(i).dot(CV.col(i)) / (du * dv);
      cands.push_back({d, i, du, dv});
    }
    if (!cands.empty()) {
      std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
        if (a.d != b.d) return a.d > b.d;
        return a.i < b.i;
      });
      const auto pick = std::min<std::size_t>(static_cast<std::size_t>(order) - 1,
                                              cands.size() - 1);
      const Cand& c = cands[pick];
      return {Vector(U.col(c.i) / c.du), Vector(V.col(c.i) / c.dv)};
    }
  }

  // All candidates thresholded away or degenerate: leading singular pair of
  // the raw cross matrix, unnormalized.
  Eigen::BDCSVD<Matrix> raw(C, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return {Vector(raw.matrixU().col(0)), Vector(raw.matrixV().col(0))};
}

}  // namespace

std::pair<Vector, Vector> initialize(const Matrix& X, const Matrix& Y, double threshold,
                                     int order) {
  if (X.rows() != Y.rows()) throw std::invalid_argument("initialize: X, Y need equal row counts");
  Matrix C = X.transpose() * Y;
  return initialize_with_cross(X, Y, C, threshold, order);
}

LinearOperator bridge_operator(const Matrix& X, double alpha, Eigen::Index p) {
  if (p != X.cols()) throw std::invalid_argument("bridge_operator: p must equal cols(X)");
  return make_bridge_operator(X, alpha);
}

std::pair<Vector, Vector> fix_sign(Vector u, Vector v) {
  Eigen::Index best = -1;
  double best_abs = 0.0;
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    const double a = std::abs(u[i]);
    if (a > best_abs) {
      best_abs = a;
      best = i;
    }
  }
  if (best >= 0 && u[best] < 0.0) {
    u = -u;
    v = -v;
  }
  return {std::move(u), std::move(v)};
}

PairContext::PairContext(const Dataset& data, double alpha_x, double alpha_y) : data_(&data) {
  C_ = data.X.transpose() * data.Y;
  Ax_ = make_bridge_operator(data.X, alpha_x);
  Ay_ = make_bridge_operator(data.Y, alpha_y);
}

PairContext::PairContext(const Dataset& data, const DeflationContext& ctx, double alpha_x,
                         double alpha_y)
    : data_(&data), order_(ctx.r) {
  ctx.validate(data.p, data.q);
  C_ = data.X.transpose() * data.Y;
  Bx_ = (data.X * ctx.U_prev).transpose() * data.X;  // U' X'X, (r-1) x p
  By_ = (data.Y * ctx.V_prev).transpose() * data.Y;
  Ax_ = make_bridge_deflation_operator(data.X, alpha_x, Bx_);
  Ay_ = make_bridge_deflation_operator(data.Y, alpha_y, By_);
}

void PairContext::reset() {
  warm_u_ = AdmmState{};
  warm_v_ = AdmmState{};
}

std::pair<Vector, Vector> PairContext::compute_init() const {
  const double thr =
      init_threshold ? *init_threshold : default_init_threshold_from_cross(C_);
  return initialize_with_cross(data_->X, data_->Y, C_, thr, order_);
}

CcaSolution PairContext::solve(const SolverConfig& cfg,
                               const std::optional<std::pair<Vector, Vector>>& init) {
  cfg.validate();
  if (init || has_warm()) return solve_core(cfg, init);

  // Cold start with nothing user-supplied. The initializer keeps only the
  // entries of X'Y above its threshold, and at low sample sizes the default
  // quantile can sit above the true signal entries, so the surviving ones are
  // noise maxima and the alternation stays on them. Try the default plus a
  // short ladder of coarser thresholds and keep the lowest penalized
  // objective; ties go to the earliest rung, so the behavior is unchanged
  // whenever the default rung is as good.
  const double cinf = C_.lpNorm<Eigen::Infinity>();
  std::vector<double> rungs{init_threshold ? *init_threshold
                                           : default_init_threshold_from_cross(C_)};
  if (!init_threshold)  // an explicit threshold pins the initialization
    for (double f : {0.5, 0.35, 0.2}) rungs.push_back(f * cinf);

  CcaSolution best;
  AdmmState best_u, best_v;
  double best_obj = 0.0;
  bool have = false;
  for (std::size_t r = 0; r < rungs.size(); ++r) {
    bool dup = false;
    for (std::size_t s = 0; s < r && !dup; ++s)
      dup = std::abs(rungs[r] - rungs[s]) <= 1e-9 * std::max(cinf, 1.0);
    if (dup) continue;
    const auto iv = initialize_with_cross(data_->X, data_->Y, C_, rungs[r], order_);
    reset();
    CcaSolution sol = solve_core(cfg, iv);
    const double obj = sol.zero_solution
                           ? 0.0
                           : -sol.u_hat.dot(C_ * sol.v_hat) + cfg.tau_u * sol.l1_u +
                                 cfg.tau_v * sol.l1_v;
    if (!have || obj < best_obj) {
      best = std::move(sol);
      best_obj = obj;
      best_u = warm_u_;
      best_v = warm_v_;
      have = true;
    }
  }
  warm_u_ = std::move(best_u);
  warm_v_ = std::move(best_v);
  return best;
}

CcaSolution PairContext::solve_core(const SolverConfig& cfg,
                                    const std::optional<std::pair<Vector, Vector>>& init) {
  const Matrix& X = data_->X;
  const Matrix& Y = data_->Y;
  const Eigen::Index p = data_->p, q = data_->q;

  Vector v;
  if (init || !has_warm()) {
    std::pair<Vector, Vector> iv;
    if (init) {
      iv = *init;
      if (iv.first.size() != p || iv.second.size() != q)
        throw std::invalid_argument("solve: init vectors have wrong length");
    } else {
      const double thr = init_threshold ? *init_threshold : default_init_threshold_from_cross(C_);
      iv = initialize_with_cross(X, Y, C_, thr, order_);
    }
    reset();
    warm_u_.u = iv.first;
    warm_u_.z = Vector::Zero(Ax_.rows);
    warm_u_.xi = Vector::Zero(Ax_.rows);
    v = iv.second;
  } else {
    v = warm_v_.u;
  }

  CcaSolution sol;
  sol.objective_history.reserve(16);
  Vector u = Vector::Zero(p);
  double prev_obj = 0.0;
  bool have_prev = false;

  for (int t = 1; t <= cfg.outer_max_iter; ++t) {
    sol.outer_iters = t;
    warm_u_ = solve_subproblem(Ax_, C_ * v, cfg.tau_u, cfg, warm_u_);
    u = warm_u_.u;
    if (u.lpNorm<Eigen::Infinity>() == 0.0) {
      v.setZero();
      sol.zero_solution = true;
      sol.converged = true;
      sol.objective_history.push_back(0.0);
      break;
    }

    if (warm_v_.empty()) {
      warm_v_.u = Vector::Zero(q);
      warm_v_.z = Vector::Zero(Ay_.rows);
      warm_v_.xi = Vector::Zero(Ay_.rows);
    }
    warm_v_ = solve_subproblem(Ay_, C_.transpose() * u, cfg.tau_v, cfg, warm_v_);
    v = warm_v_.u;
    if (v.lpNorm<Eigen::Infinity>() == 0.0) {
      u.setZero();
      sol.zero_solution = true;
      sol.converged = true;
      sol.objective_history.push_back(0.0);
      break;
    }

    const double obj = -u.dot(C_ * v) + cfg.tau_u * u.lpNorm<1>() + cfg.tau_v * v.lpNorm<1>();
    sol.objective_history.push_back(obj);
    if (have_prev && std::abs(obj - prev_obj) <= cfg.outer_tol * std::max(1.0, std::abs(prev_obj))) {
      sol.converged = true;
      break;
    }
    prev_obj = obj;
    have_prev = true;
  }

  sol.inner_primal_u = warm_u_.primal_residual;
  sol.inner_dual_u = warm_u_.dual_residual;
  sol.inner_primal_v = warm_v_.primal_residual;
  sol.inner_dual_v = warm_v_.dual_residual;

  auto [fu, fv] = fix_sign(std::move(u), std::move(v));
  sol.u_hat = std::move(fu);
  sol.v_hat = std::move(fv);
  sol.l1_u = sol.u_hat.lpNorm<1>();
  sol.l1_v = sol.v_hat.lpNorm<1>();
  const Vector xu = X * sol.u_hat;
  const Vector yv = Y * sol.v_hat;
  const double nx = xu.norm(), ny = yv.norm();
  sol.sample_corr = (nx > 0.0 && ny > 0.0) ? xu.dot(yv) / (nx * ny) : 0.0;
  return sol;
}

CcaSolution solve_first_pair(const Dataset& data, const SolverConfig& cfg,
                             const std::optional<std::pair<Vector, Vector>>& init) {
  PairContext ctx(data, cfg.alpha_x, cfg.alpha_y);
  return ctx.solve(cfg, init);
}

CcaSolution solve_rth_pair(const Dataset& data, const DeflationContext& dctx,
                           const SolverConfig& cfg) {
  PairContext ctx(data, dctx, cfg.alpha_x, cfg.alpha_y);
  return ctx.solve(cfg, std::nullopt);
}

}  // namespace scca
