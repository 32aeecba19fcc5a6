#pragma once

#include <optional>
#include <string>
#include <vector>

#include "scca/core.hpp"
#include "scca/simulation.hpp"

namespace scca {

// One solve's evaluation row. Benchmarks emit one row per
// (replicate, method, grid point); Pareto sweeps reuse the shape with rep 0.
struct RunRecord {
  int rep = 0;
  std::string method;
  int grid_index = -1;  // -1 when the method has no tau grid
  double tau_u = 0.0;
  double tau_v = 0.0;
  double sample_corr = 0.0;
  double population_corr = 0.0;
  double loss_u = 2.0;
  double loss_v = 2.0;
  double l1_sum = 0.0;
  double scaled_l1_sum = 0.0;
  double support_f1_u = 0.0;
  double support_f1_v = 0.0;
  bool degenerate = false;
  bool oracle = false;  // marks the grid point chosen by the loss argmin
  bool failed = false;
  std::string error;
};

// Per-method averages over the oracle rows, the tables' format.
struct MethodSummary {
  std::string method;
  int replicates_ok = 0;
  double mean_corr = 0.0;
  double mean_loss_u = 0.0;
  double mean_loss_v = 0.0;
  double mean_f1_u = 0.0;
  double mean_f1_v = 0.0;
};

// Paired tau grid. With `absolute` values present they are used verbatim
// (equal lengths, zipped); otherwise each replicate's taus are `fractions`
// of that replicate's dead zone ||X'Y v0||_inf (u side; analogously for v).
// Either way rows are ordered tau-descending; the sweep solves the median
// point first and walks outward with warm starts.
struct TauGrid {
  std::vector<double> fractions;   // empty = default 15-point grid
  std::vector<double> absolute_u;  // nonempty overrides fractions
  std::vector<double> absolute_v;
};

struct BenchmarkConfig {
  ScenarioSpec scenario;
  int replicates = 10;
  TauGrid grid;
  std::vector<std::string> methods{"ours"};
  SolverConfig solver;       // tau_u, tau_v overwritten per grid point
  double classical_ridge = 1e-3;
  int pma_max_iter = 1000;
  int threads = 0;  // 0 = hardware count
};

struct BenchmarkResult {
  std::vector<RunRecord> records;     // every grid point of every replicate
  std::vector<MethodSummary> summaries;
};

std::vector<double> default_tau_fractions(int points = 15);

// Draws truth + data per replicate (sub-seeded from scenario.seed), runs each
// method over the tau grid, picks the oracle tau minimizing
// loss(u) + loss(v), and averages the oracle rows. Individual failures are
// recorded on their rows; the run continues.
BenchmarkResult run_benchmark(const BenchmarkConfig& cfg);

struct ParetoConfig {
  TauGrid grid;
  SolverConfig solver;
  int pma_max_iter = 1000;
  std::vector<std::string> methods{"ours", "pma"};
};

// Tau sweep on one fixed dataset (centered/scaled by the caller). Rows come
// back in method-then-grid order; truth adds population coordinates.
std::vector<RunRecord> pareto_sweep(const Dataset& data, const ParetoConfig& cfg,
                                    const TruthSpec* truth = nullptr);

// Distance machinery for frontier-vs-point comparisons: min Euclidean
// distance from `point` to `pts` after scaling both axes to [0,1] over the
// union of all supplied coordinates (the point included).
struct AxisPoint {
  double x = 0.0;  // correlation axis
  double y = 0.0;  // l1 axis
};
double frontier_distance(const std::vector<AxisPoint>& frontier, AxisPoint point,
                         const std::vector<AxisPoint>& axis_union);

}  // namespace scca
