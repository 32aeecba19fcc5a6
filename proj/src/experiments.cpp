#include "scca/experiments.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

#include "scca/baselines.hpp"
#include "scca/metrics.hpp"
#include "scca/rng.hpp"
#include "scca/solver.hpp"

namespace scca {

std::vector<double> default_tau_fractions(int points) {
  if (points < 1) throw std::invalid_argument("default_tau_fractions: points >= 1 required");
  std::vector<double> f(static_cast<std::size_t>(points));
  const double lo = 0.02, hi = 0.9;
  if (points == 1) {
    f[0] = hi;
    return f;
  }
  const double step = std::log(hi / lo) / (points - 1);
  for (int i = 0; i < points; ++i) f[static_cast<std::size_t>(i)] = lo * std::exp(step * i);
  return f;
}

namespace {

void check_grid(const TauGrid& g) {
  if (g.absolute_u.size() != g.absolute_v.size())
    throw std::invalid_argument("tau grid: tau_grid_u and tau_grid_v must pair up");
  for (double x : g.absolute_u)
    if (!(x >= 0.0)) throw std::invalid_argument("tau grid: taus must be nonnegative");
  for (double x : g.absolute_v)
    if (!(x >= 0.0)) throw std::invalid_argument("tau grid: taus must be nonnegative");
  for (double x : g.fractions)
    if (!(x >= 0.0)) throw std::invalid_argument("tau grid: fractions must be nonnegative");
}

// Paired (tau_u, tau_v) points, descending. Ceilings only matter in the
// relative mode.
std::vector<std::pair<double, double>> resolve_grid(const TauGrid& g, double ceil_u,
                                                    double ceil_v) {
  std::vector<std::pair<double, double>> taus;
  if (!g.absolute_u.empty()) {
    taus.reserve(g.absolute_u.size());
    for (std::size_t i = 0; i < g.absolute_u.size(); ++i)
      taus.emplace_back(g.absolute_u[i], g.absolute_v[i]);
  } else {
    std::vector<double> f = g.fractions.empty() ? default_tau_fractions() : g.fractions;
    taus.reserve(f.size());
    for (double x : f) taus.emplace_back(x * ceil_u, x * ceil_v);
  }
  std::sort(taus.begin(), taus.end(), std::greater<>());
  return taus;
}

void fill_eval(RunRecord& rec, const CcaSolution& sol, const Dataset& ds, const TruthSpec* truth) {
  rec.l1_sum = sol.l1_u + sol.l1_v;
  if (sol.zero_solution || sol.u_hat.norm() == 0.0 || sol.v_hat.norm() == 0.0) {
    rec.degenerate = true;
    return;
  }
  rec.sample_corr = sol.sample_corr;
  const double nx = (ds.X * sol.u_hat).norm();
  const double ny = (ds.Y * sol.v_hat).norm();
  rec.scaled_l1_sum = (nx > 0.0 ? sol.l1_u / nx : sol.l1_u) + (ny > 0.0 ? sol.l1_v / ny : sol.l1_v);
  if (truth) {
    rec.population_corr = population_correlation(*truth, sol.u_hat, sol.v_hat);
    rec.loss_u = loss(sol.u_hat, truth->u_true);
    rec.loss_v = loss(sol.v_hat, truth->v_true);
    rec.support_f1_u = support_f1(sol.u_hat, truth->u_true);
    rec.support_f1_v = support_f1(sol.v_hat, truth->v_true);
  }
}

// Grid sweep of the alternating solver on one dataset. Rows come back in
// descending-tau order, but the solve order anchors at the median grid point:
// the anchor starts cold (the solver's own multi-start), then warm starts
// walk outward to the dense and sparse ends. Cold-starting at the sparse end
// instead would let the few strongest cross-covariance entries, which at low
// sample sizes are often noise, fix the path for the whole grid.
std::vector<RunRecord> sweep_ours(const Dataset& ds, const TruthSpec* truth, const TauGrid& grid,
                                  const SolverConfig& base) {
  PairContext down(ds, base.alpha_x, base.alpha_y);
  const auto init = down.compute_init();
  const double ceil_u = std::max((down.cross() * init.second).lpNorm<Eigen::Infinity>(), 1e-12);
  const double ceil_v =
      std::max((down.cross().transpose() * init.first).lpNorm<Eigen::Infinity>(), 1e-12);
  const auto taus = resolve_grid(grid, ceil_u, ceil_v);
  const std::size_t points = taus.size();
  const std::size_t anchor = points / 2;

  std::vector<RunRecord> rows(points);
  const auto solve_into = [&](PairContext& pc, std::size_t i,
                              const std::optional<std::pair<Vector, Vector>>& iv) {
    RunRecord& rec = rows[i];
    rec.method = "ours";
    rec.grid_index = static_cast<int>(i);
    rec.tau_u = taus[i].first;
    rec.tau_v = taus[i].second;
    SolverConfig cfg = base;
    cfg.tau_u = rec.tau_u;
    cfg.tau_v = rec.tau_v;
    CcaSolution sol;
    try {
      sol = pc.solve(cfg, iv);
      fill_eval(rec, sol, ds, truth);
      // a zero fixed point leaves nothing to continue from; the next grid
      // point restarts cold
      if (rec.degenerate) pc.reset();
    } catch (const std::exception& e) {
      rec.failed = true;
      rec.error = e.what();
      pc.reset();
    }
    return sol;
  };

  const CcaSolution anchor_sol = solve_into(down, anchor, std::nullopt);
  for (std::size_t i = anchor + 1; i < points; ++i) solve_into(down, i, std::nullopt);

  if (anchor > 0) {
    PairContext up(ds, base.alpha_x, base.alpha_y);
    std::optional<std::pair<Vector, Vector>> seed;
    if (anchor_sol.u_hat.size() > 0 && !anchor_sol.zero_solution)
      seed.emplace(anchor_sol.u_hat, anchor_sol.v_hat);
    for (std::size_t i = anchor; i-- > 0;) {
      solve_into(up, i, seed);
      seed.reset();
    }
  }
  return rows;
}

std::vector<RunRecord> sweep_pma(const Dataset& ds, const TruthSpec* truth, const TauGrid& grid,
                                 int max_iter) {
  const Matrix C = ds.X.transpose() * ds.Y;
  Eigen::BDCSVD<Matrix> svd(C, Eigen::ComputeThinV);
  const Vector v_lead = svd.matrixV().col(0);
  const double ceil_u = std::max((C * v_lead).lpNorm<Eigen::Infinity>(), 1e-12);
  const double ceil_v = std::max((C.transpose() * (C * v_lead).normalized())
                                     .lpNorm<Eigen::Infinity>(), 1e-12);
  const auto taus = resolve_grid(grid, ceil_u, ceil_v);

  std::vector<RunRecord> rows;
  rows.reserve(taus.size());
  Vector v_warm = v_lead;
  for (std::size_t i = 0; i < taus.size(); ++i) {
    RunRecord rec;
    rec.method = "pma";
    rec.grid_index = static_cast<int>(i);
    rec.tau_u = taus[i].first;
    rec.tau_v = taus[i].second;
    try {
      PmaCore core = pma_iterate(C, rec.tau_u, rec.tau_v, max_iter, v_warm);
      CcaSolution sol;
      sol.u_hat = core.u;
      sol.v_hat = core.v;
      sol.zero_solution = core.zero;
      sol.converged = core.converged;
      sol.outer_iters = core.iters;
      sol.l1_u = core.u.lpNorm<1>();
      sol.l1_v = core.v.lpNorm<1>();
      if (!core.zero) {
        v_warm = core.v;
        sol.sample_corr = sample_correlation(ds.X, ds.Y, core.u, core.v);
      } else {
        v_warm = v_lead;
      }
      fill_eval(rec, sol, ds, truth);
    } catch (const std::exception& e) {
      rec.failed = true;
      rec.error = e.what();
      v_warm = v_lead;
    }
    rows.push_back(std::move(rec));
  }
  return rows;
}

RunRecord run_classical(const Dataset& ds, const TruthSpec* truth, double ridge) {
  RunRecord rec;
  rec.method = "classical";
  rec.oracle = true;  // no grid: its single output is the method's answer
  try {
    const auto triples = classical_cca(ds.X, ds.Y, 1, ridge);
    CcaSolution sol;
    sol.u_hat = triples[0].u;
    sol.v_hat = triples[0].v;
    sol.l1_u = sol.u_hat.lpNorm<1>();
    sol.l1_v = sol.v_hat.lpNorm<1>();
    sol.sample_corr = sample_correlation(ds.X, ds.Y, sol.u_hat, sol.v_hat);
    fill_eval(rec, sol, ds, truth);
  } catch (const std::exception& e) {
    rec.failed = true;
    rec.error = e.what();
  }
  return rec;
}

void mark_oracle(std::vector<RunRecord>& rows) {
  int best = -1;
  double best_loss = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].failed || rows[i].degenerate || rows[i].grid_index < 0) continue;
    const double l = rows[i].loss_u + rows[i].loss_v;
    if (l < best_loss) {
      best_loss = l;
      best = static_cast<int>(i);
    }
  }
  if (best >= 0) rows[static_cast<std::size_t>(best)].oracle = true;
}

}  // namespace

BenchmarkResult run_benchmark(const BenchmarkConfig& cfg) {
  cfg.scenario.validate();
  cfg.solver.validate();
  if (cfg.replicates < 1) throw std::invalid_argument("run_benchmark: replicates >= 1 required");
  if (cfg.methods.empty()) throw std::invalid_argument("run_benchmark: no methods selected");
  for (const auto& m : cfg.methods)
    if (m != "ours" && m != "pma" && m != "classical")
      throw std::invalid_argument("run_benchmark: unknown method " + m);
  check_grid(cfg.grid);

  std::vector<std::vector<RunRecord>> per_rep(static_cast<std::size_t>(cfg.replicates));
  std::atomic<int> next{0};
  auto worker = [&]() {
    for (;;) {
      const int r = next.fetch_add(1);
      if (r >= cfg.replicates) return;
      auto& rows = per_rep[static_cast<std::size_t>(r)];
      try {
        ScenarioSpec sc = cfg.scenario;
        sc.seed = mix_seed(cfg.scenario.seed, 1000 + static_cast<std::uint64_t>(r));
        const TruthSpec truth = make_truth(sc);
        const Dataset raw =
            sample_joint(truth, sc.n, mix_seed(cfg.scenario.seed, 2000 + static_cast<std::uint64_t>(r)));
        const Dataset ds = make_dataset(raw.X, raw.Y, ScaleMode::UnitVariance);

        for (const auto& m : cfg.methods) {
          std::vector<RunRecord> rows_m;
          if (m == "ours")
            rows_m = sweep_ours(ds, &truth, cfg.grid, cfg.solver);
          else if (m == "pma")
            rows_m = sweep_pma(ds, &truth, cfg.grid, cfg.pma_max_iter);
          else
            rows_m = {run_classical(ds, &truth, cfg.classical_ridge)};
          mark_oracle(rows_m);
          for (auto& rec : rows_m) rec.rep = r;
          rows.insert(rows.end(), std::make_move_iterator(rows_m.begin()),
                      std::make_move_iterator(rows_m.end()));
        }
      } catch (const std::exception& e) {
        RunRecord rec;
        rec.rep = r;
        rec.method = "scenario";
        rec.failed = true;
        rec.error = e.what();
        rows.push_back(std::move(rec));
      }
    }
  };

  int threads = cfg.threads > 0 ? cfg.threads
                                : static_cast<int>(std::thread::hardware_concurrency());
  threads = std::max(1, std::min(threads, cfg.replicates));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  BenchmarkResult out;
  for (auto& rows : per_rep)
    out.records.insert(out.records.end(), std::make_move_iterator(rows.begin()),
                       std::make_move_iterator(rows.end()));

  for (const auto& m : cfg.methods) {
    MethodSummary s;
    s.method = m;
    for (const auto& rec : out.records) {
      if (rec.method != m || !rec.oracle || rec.failed || rec.degenerate) continue;
      s.replicates_ok += 1;
      s.mean_corr += rec.sample_corr;
      s.mean_loss_u += rec.loss_u;
      s.mean_loss_v += rec.loss_v;
      s.mean_f1_u += rec.support_f1_u;
      s.mean_f1_v += rec.support_f1_v;
    }
    if (s.replicates_ok > 0) {
      s.mean_corr /= s.replicates_ok;
      s.mean_loss_u /= s.replicates_ok;
      s.mean_loss_v /= s.replicates_ok;
      s.mean_f1_u /= s.replicates_ok;
      s.mean_f1_v /= s.replicates_ok;
    }
    out.summaries.push_back(std::move(s));
  }
  return out;
}

std::vector<RunRecord> pareto_sweep(const Dataset& data, const ParetoConfig& cfg,
                                    const TruthSpec* truth) {
  cfg.solver.validate();
  if (cfg.methods.empty()) throw std::invalid_argument("pareto_sweep: no methods selected");
  check_grid(cfg.grid);
  std::vector<RunRecord> rows;
  for (const auto& m : cfg.methods) {
    std::vector<RunRecord> rows_m;
    if (m == "ours")
      rows_m = sweep_ours(data, truth, cfg.grid, cfg.solver);
    else if (m == "pma")
      rows_m = sweep_pma(data, truth, cfg.grid, cfg.pma_max_iter);
    else
      throw std::invalid_argument("pareto_sweep: unknown method " + m);
    rows.insert(rows.end(), std::make_move_iterator(rows_m.begin()),
                std::make_move_iterator(rows_m.end()));
  }
  return rows;
}

double frontier_distance(const std::vector<AxisPoint>& frontier, AxisPoint point,
                         const std::vector<AxisPoint>& axis_union) {
  if (frontier.empty()) return std::numeric_limits<double>::infinity();
  double xmin = point.x, xmax = point.x, ymin = point.y, ymax = point.y;
  for (const auto& p : axis_union) {
    xmin = std::min(xmin, p.x);
    xmax = std::max(xmax, p.x);
    ymin = std::min(ymin, p.y);
    ymax = std::max(ymax, p.y);
  }
  const double sx = xmax > xmin ? xmax - xmin : 1.0;
  const double sy = ymax > ymin ? ymax - ymin : 1.0;
  double best = std::numeric_limits<double>::infinity();
  for (const auto& p : frontier) {
    const double dx = (p.x - point.x) / sx;
    const double dy = (p.y - point.y) / sy;
    best = std::min(best, std::hypot(dx, dy));
  }
  return best;
}

}  // namespace scca
