#include "scca/cli.hpp"

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "scca/core.hpp"
#include "scca/experiments.hpp"
#include "scca/metrics.hpp"
#include "scca/rng.hpp"
#include "scca/simulation.hpp"
#include "scca/solver.hpp"
#include "scca/version.hpp"

namespace scca {
namespace {

using json = nlohmann::json;
namespace fs = std::filesystem;

// Round-trip formatting for CSV cells; JSON numbers round-trip on their own.
std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string csv_quote(const std::string& s) {
  if (s.empty()) return s;
  std::string out = "\"";
  for (char c : s) {
    out += c;
    if (c == '"') out += '"';
  }
  out += '"';
  return out;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw std::invalid_argument("config: " + path + ": " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot write " + path);
  out << text;
  if (!out) throw std::invalid_argument("write failed for " + path);
}

void write_json_file(const std::string& path, const json& j) {
  write_text_file(path, j.dump(2) + "\n");
}

json vec_to_json(const Vector& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

Vector vec_from_json(const json& a, const char* what) {
  if (!a.is_array()) throw std::invalid_argument(std::string(what) + ": expected an array");
  Vector v(static_cast<Eigen::Index>(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!a[i].is_number())
      throw std::invalid_argument(std::string(what) + ": non-numeric entry at index " +
                                  std::to_string(i));
    v[static_cast<Eigen::Index>(i)] = a[i].get<double>();
  }
  return v;
}

void check_keys(const json& j, std::initializer_list<const char*> allowed, const char* where) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
    for (const char* k : allowed)
      if (it.key() == k) {
        known = true;
        break;
      }
    if (!known)
      throw std::invalid_argument(std::string("config: unknown key '") + it.key() + "' in " +
                                  where);
  }
}

// scenario{family, n, p, q, s_u, s_v, rho, seed, replicates} plus per-family
// knobs. `replicates` is read here because it lives inside the scenario block.
ScenarioSpec parse_scenario(const json& j, int* replicates_out) {
  if (!j.is_object()) throw std::invalid_argument("config: scenario must be an object");
  check_keys(j,
             {"family", "n", "p", "q", "s_u", "s_v", "rho", "seed", "replicates", "toeplitz_base",
              "spiked_k", "spiked_lambda", "blocks", "block_base"},
             "scenario");
  ScenarioSpec sc;
  sc.family = cov_family_from_string(j.at("family").get<std::string>());
  sc.n = j.at("n").get<int>();
  sc.p = j.at("p").get<int>();
  sc.q = j.at("q").get<int>();
  sc.s_u = j.at("s_u").get<int>();
  sc.s_v = j.at("s_v").get<int>();
  sc.rho = j.at("rho").get<double>();
  sc.seed = j.at("seed").get<std::uint64_t>();
  sc.toeplitz_base = j.value("toeplitz_base", sc.toeplitz_base);
  sc.spiked_k = j.value("spiked_k", sc.spiked_k);
  sc.spiked_lambda = j.value("spiked_lambda", sc.spiked_lambda);
  sc.blocks = j.value("blocks", sc.blocks);
  sc.block_base = j.value("block_base", sc.block_base);
  sc.validate();
  if (replicates_out) *replicates_out = j.value("replicates", 10);
  return sc;
}

json scenario_to_json(const ScenarioSpec& sc, int replicates) {
  json j{{"family", cov_family_name(sc.family)},
         {"n", sc.n},
         {"p", sc.p},
         {"q", sc.q},
         {"s_u", sc.s_u},
         {"s_v", sc.s_v},
         {"rho", sc.rho},
         {"seed", sc.seed},
         {"replicates", replicates}};
  switch (sc.family) {
    case CovFamily::Toeplitz:
      j["toeplitz_base"] = sc.toeplitz_base;
      break;
    case CovFamily::Spiked:
      j["spiked_k"] = sc.spiked_k;
      j["spiked_lambda"] = sc.spiked_lambda;
      break;
    case CovFamily::BlockToeplitz:
      j["blocks"] = sc.blocks;
      j["block_base"] = sc.block_base;
      break;
    default:
      break;
  }
  return j;
}

// solver{tau_grid_u, tau_grid_v, alpha, tol, max_iter} plus the advanced
// knobs. `tol` sets both tolerances, `max_iter` the inner cap; the explicit
// per-loop keys override afterwards.
void parse_solver_block(const json& j, SolverConfig& cfg, TauGrid& grid) {
  if (!j.is_object()) throw std::invalid_argument("config: solver must be an object");
  check_keys(j,
             {"tau_grid_u", "tau_grid_v", "tau_fractions", "tau_points", "alpha", "tol",
              "max_iter", "inner_tol", "outer_tol", "inner_max_iter", "outer_max_iter", "mu",
              "lambda", "auto_step", "alpha_x", "alpha_y"},
             "solver");
  if (j.contains("alpha")) {
    const double a = j["alpha"].get<double>();
    cfg.alpha_x = a;
    cfg.alpha_y = a;
  }
  if (j.contains("alpha_x")) cfg.alpha_x = j["alpha_x"].get<double>();
  if (j.contains("alpha_y")) cfg.alpha_y = j["alpha_y"].get<double>();
  if (j.contains("tol")) {
    const double t = j["tol"].get<double>();
    cfg.inner_tol = t;
    cfg.outer_tol = t;
  }
  if (j.contains("inner_tol")) cfg.inner_tol = j["inner_tol"].get<double>();
  if (j.contains("outer_tol")) cfg.outer_tol = j["outer_tol"].get<double>();
  if (j.contains("max_iter")) cfg.inner_max_iter = j["max_iter"].get<int>();
  if (j.contains("inner_max_iter")) cfg.inner_max_iter = j["inner_max_iter"].get<int>();
  if (j.contains("outer_max_iter")) cfg.outer_max_iter = j["outer_max_iter"].get<int>();
  if (j.contains("mu")) {
    cfg.mu = j["mu"].get<double>();
    cfg.auto_step = false;
  }
  if (j.contains("lambda")) cfg.lambda = j["lambda"].get<double>();
  if (j.contains("auto_step")) cfg.auto_step = j["auto_step"].get<bool>();
  cfg.validate();
  if (j.contains("tau_fractions") && j.contains("tau_points"))
    throw std::invalid_argument("config: give tau_fractions or tau_points, not both");
  if (j.contains("tau_fractions")) grid.fractions = j["tau_fractions"].get<std::vector<double>>();
  if (j.contains("tau_points")) grid.fractions = default_tau_fractions(j["tau_points"].get<int>());
  if (j.contains("tau_grid_u")) grid.absolute_u = j["tau_grid_u"].get<std::vector<double>>();
  if (j.contains("tau_grid_v")) grid.absolute_v = j["tau_grid_v"].get<std::vector<double>>();
}

json solver_to_json(const SolverConfig& cfg, const TauGrid& grid) {
  json j{{"alpha_x", cfg.alpha_x},
         {"alpha_y", cfg.alpha_y},
         {"inner_tol", cfg.inner_tol},
         {"outer_tol", cfg.outer_tol},
         {"inner_max_iter", cfg.inner_max_iter},
         {"outer_max_iter", cfg.outer_max_iter},
         {"lambda", cfg.lambda},
         {"auto_step", cfg.auto_step}};
  if (!cfg.auto_step) j["mu"] = cfg.mu;
  if (!grid.absolute_u.empty() || !grid.absolute_v.empty()) {
    j["tau_grid_u"] = grid.absolute_u;
    j["tau_grid_v"] = grid.absolute_v;
  } else {
    j["tau_fractions"] = grid.fractions.empty() ? default_tau_fractions() : grid.fractions;
  }
  return j;
}

int cmd_simulate(const std::string& config_path, const std::string& out_dir) {
  json cfg = read_json_file(config_path);
  check_keys(cfg, {"scenario"}, "top level");
  if (!cfg.contains("scenario"))
    throw std::invalid_argument("config: missing 'scenario' block");
  int replicates = 10;
  ScenarioSpec sc = parse_scenario(cfg["scenario"], &replicates);
  if (replicates < 1) throw std::invalid_argument("config: replicates >= 1 required");

  fs::create_directories(out_dir);
  json manifest{{"version", kVersion},
                {"scenario", scenario_to_json(sc, replicates)},
                {"replicates", json::array()}};
  for (int r = 0; r < replicates; ++r) {
    ScenarioSpec sr = sc;
    sr.seed = mix_seed(sc.seed, 1000 + static_cast<std::uint64_t>(r));
    const std::uint64_t sample_seed = mix_seed(sc.seed, 2000 + static_cast<std::uint64_t>(r));
    const TruthSpec truth = make_truth(sr);
    const Dataset raw = sample_joint(truth, sc.n, sample_seed);

    char name[16];
    std::snprintf(name, sizeof(name), "rep%03d", r);
    const fs::path dir = fs::path(out_dir) / name;
    fs::create_directories(dir);
    write_csv((dir / "X.csv").string(), raw.X);
    write_csv((dir / "Y.csv").string(), raw.Y);
    write_json_file((dir / "truth.json").string(),
                    json{{"version", kVersion},
                         {"replicate", r},
                         {"family", cov_family_name(sc.family)},
                         {"rho", truth.rho},
                         {"seed", sc.seed},
                         {"truth_seed", sr.seed},
                         {"sample_seed", sample_seed},
                         {"scenario", scenario_to_json(sc, replicates)},
                         {"u_true", vec_to_json(truth.u_true)},
                         {"v_true", vec_to_json(truth.v_true)}});
    manifest["replicates"].push_back(name);
  }
  write_json_file((fs::path(out_dir) / "manifest.json").string(), manifest);
  return 0;
}

struct SolveOpts {
  std::string x_path, y_path;
  std::string out_path = "solution.json";
  bool header = false;
  double tau_u = 0.0, tau_v = 0.0;
  double alpha = 1.0;
  int rank = 1;
  std::string init = "auto";
  std::string init_file;
  std::uint64_t seed = 0;
  double tol = -1.0;  // < 0 keeps the defaults
  int max_iter = -1;
  int outer_max_iter = -1;
};

int cmd_solve(const SolveOpts& o) {
  const Matrix Xraw = load_csv(o.x_path, o.header);
  const Matrix Yraw = load_csv(o.y_path, o.header);
  const Dataset data = make_dataset(Xraw, Yraw, ScaleMode::UnitVariance);

  SolverConfig cfg;
  cfg.tau_u = o.tau_u;
  cfg.tau_v = o.tau_v;
  cfg.alpha_x = o.alpha;
  cfg.alpha_y = o.alpha;
  if (o.tol > 0) {
    cfg.inner_tol = o.tol;
    cfg.outer_tol = o.tol;
  }
  if (o.max_iter > 0) cfg.inner_max_iter = o.max_iter;
  if (o.outer_max_iter > 0) cfg.outer_max_iter = o.outer_max_iter;
  cfg.validate();
  if (o.rank < 1 || o.rank > std::min(data.p, data.q))
    throw std::invalid_argument("--rank must lie in [1, min(p, q)]");

  // Explicit starts apply to the first pair; deflated pairs always use the
  // default initialization at their own order.
  std::optional<std::pair<Vector, Vector>> init;
  if (o.init == "zeros") {
    init = std::make_pair(Vector(Vector::Zero(data.p)), Vector(Vector::Zero(data.q)));
  } else if (o.init == "file") {
    if (o.init_file.empty()) throw std::invalid_argument("--init file requires --init-file");
    const json ij = read_json_file(o.init_file);
    init = std::make_pair(vec_from_json(ij.at("u"), "init u"), vec_from_json(ij.at("v"), "init v"));
  }

  json config_echo{{"x", o.x_path},
                   {"y", o.y_path},
                   {"header", o.header},
                   {"tau_u", cfg.tau_u},
                   {"tau_v", cfg.tau_v},
                   {"alpha", o.alpha},
                   {"rank", o.rank},
                   {"init", o.init},
                   {"seed", o.seed},
                   {"inner_tol", cfg.inner_tol},
                   {"outer_tol", cfg.outer_tol},
                   {"inner_max_iter", cfg.inner_max_iter},
                   {"outer_max_iter", cfg.outer_max_iter}};
  if (!o.init_file.empty()) config_echo["init_file"] = o.init_file;

  json pairs = json::array();
  Matrix U(data.p, 0), V(data.q, 0);
  try {
    for (int r = 1; r <= o.rank; ++r) {
      CcaSolution sol;
      if (r == 1) {
        sol = solve_first_pair(data, cfg, init);
      } else {
        DeflationContext ctx;
        ctx.U_prev = U;
        ctx.V_prev = V;
        ctx.r = r;
        sol = solve_rth_pair(data, ctx, cfg);
      }
      double orth_u = 0.0, orth_v = 0.0;
      if (U.cols() > 0) {
        orth_u = ((data.X * U).transpose() * (data.X * sol.u_hat)).cwiseAbs().maxCoeff();
        orth_v = ((data.Y * V).transpose() * (data.Y * sol.v_hat)).cwiseAbs().maxCoeff();
      }
      pairs.push_back(json{
          {"u_hat", vec_to_json(sol.u_hat)},
          {"v_hat", vec_to_json(sol.v_hat)},
          {"sample_corr", sol.sample_corr},
          {"l1_u", sol.l1_u},
          {"l1_v", sol.l1_v},
          {"outer_iters", sol.outer_iters},
          {"converged", sol.converged},
          {"zero_solution", sol.zero_solution},
          {"objective_history", sol.objective_history},
          {"residuals", json{{"inner_primal_u", sol.inner_primal_u},
                             {"inner_dual_u", sol.inner_dual_u},
                             {"inner_primal_v", sol.inner_primal_v},
                             {"inner_dual_v", sol.inner_dual_v}}},
          {"orthogonality", json{{"u", orth_u}, {"v", orth_v}}}});
      U.conservativeResize(Eigen::NoChange, U.cols() + 1);
      U.col(U.cols() - 1) = sol.u_hat;
      V.conservativeResize(Eigen::NoChange, V.cols() + 1);
      V.col(V.cols() - 1) = sol.v_hat;
    }
  } catch (const std::runtime_error& e) {
    write_json_file(o.out_path,
                    json{{"version", kVersion}, {"config", config_echo}, {"error", e.what()}});
    std::cerr << "solve failed: " << e.what() << "\n";
    return 2;
  }
  write_json_file(o.out_path, json{{"version", kVersion}, {"config", config_echo}, {"pairs", pairs}});
  return 0;
}

std::string records_csv(const std::vector<RunRecord>& records) {
  std::string s =
      "rep,method,grid_index,tau_u,tau_v,sample_corr,population_corr,loss_u,loss_v,l1_sum,"
      "scaled_l1_sum,support_f1_u,support_f1_v,degenerate,oracle,failed,error\n";
  for (const auto& r : records) {
    s += std::to_string(r.rep);
    s += ',' + r.method + ',' + std::to_string(r.grid_index);
    s += ',' + fmt(r.tau_u) + ',' + fmt(r.tau_v);
    s += ',' + fmt(r.sample_corr) + ',' + fmt(r.population_corr);
    s += ',' + fmt(r.loss_u) + ',' + fmt(r.loss_v);
    s += ',' + fmt(r.l1_sum) + ',' + fmt(r.scaled_l1_sum);
    s += ',' + fmt(r.support_f1_u) + ',' + fmt(r.support_f1_v);
    s += r.degenerate ? ",1" : ",0";
    s += r.oracle ? ",1" : ",0";
    s += r.failed ? ",1" : ",0";
    s += ',' + csv_quote(r.error) + '\n';
  }
  return s;
}

std::string summary_csv(const std::vector<MethodSummary>& sums) {
  std::string s = "method,replicates_ok,mean_corr,mean_loss_u,mean_loss_v,mean_f1_u,mean_f1_v\n";
  for (const auto& m : sums) {
    s += m.method + ',' + std::to_string(m.replicates_ok);
    s += ',' + fmt(m.mean_corr) + ',' + fmt(m.mean_loss_u) + ',' + fmt(m.mean_loss_v);
    s += ',' + fmt(m.mean_f1_u) + ',' + fmt(m.mean_f1_v) + '\n';
  }
  return s;
}

std::string human_table(const BenchmarkConfig& bc, const BenchmarkResult& res) {
  char line[256];
  const ScenarioSpec& sc = bc.scenario;
  std::string s;
  std::snprintf(line, sizeof(line),
                "scenario %s: n=%d p=%d q=%d s_u=%d s_v=%d rho=%g seed=%llu replicates=%d\n",
                cov_family_name(sc.family), sc.n, sc.p, sc.q, sc.s_u, sc.s_v, sc.rho,
                static_cast<unsigned long long>(sc.seed), bc.replicates);
  s += line;
  std::snprintf(line, sizeof(line), "%-10s %8s %8s %8s %8s %8s %7s\n", "method", "rho_hat", "e_u",
                "e_v", "f1_u", "f1_v", "ok");
  s += line;
  for (const auto& m : res.summaries) {
    if (m.replicates_ok == 0) {
      std::snprintf(line, sizeof(line), "%-10s %8s %8s %8s %8s %8s %3d/%-3d\n", m.method.c_str(),
                    "-", "-", "-", "-", "-", 0, bc.replicates);
    } else {
      std::snprintf(line, sizeof(line), "%-10s %8.3f %8.3f %8.3f %8.3f %8.3f %3d/%-3d\n",
                    m.method.c_str(), m.mean_corr, m.mean_loss_u, m.mean_loss_v, m.mean_f1_u,
                    m.mean_f1_v, m.replicates_ok, bc.replicates);
    }
    s += line;
  }
  return s;
}

int cmd_benchmark(const std::string& config_path, const std::string& out_dir) {
  json cj = read_json_file(config_path);
  check_keys(cj, {"scenario", "solver", "methods", "threads", "classical_ridge", "pma_max_iter"},
             "top level");
  if (!cj.contains("scenario")) throw std::invalid_argument("config: missing 'scenario' block");

  BenchmarkConfig bc;
  bc.scenario = parse_scenario(cj["scenario"], &bc.replicates);
  if (bc.replicates < 1)
    throw std::invalid_argument("config: replicates >= 1 required (the table would be empty)");
  if (cj.contains("solver")) parse_solver_block(cj["solver"], bc.solver, bc.grid);
  if (cj.contains("methods")) bc.methods = cj["methods"].get<std::vector<std::string>>();
  if (bc.methods.empty()) throw std::invalid_argument("config: methods must be nonempty");
  for (const auto& m : bc.methods)
    if (m != "ours" && m != "pma" && m != "classical")
      throw std::invalid_argument("config: unknown method '" + m + "'");
  if (cj.contains("threads")) bc.threads = cj["threads"].get<int>();
  if (cj.contains("classical_ridge")) bc.classical_ridge = cj["classical_ridge"].get<double>();
  if (cj.contains("pma_max_iter")) bc.pma_max_iter = cj["pma_max_iter"].get<int>();

  const BenchmarkResult res = run_benchmark(bc);

  fs::create_directories(out_dir);
  const fs::path dir(out_dir);
  write_text_file((dir / "records.csv").string(), records_csv(res.records));
  write_text_file((dir / "summary.csv").string(), summary_csv(res.summaries));
  const std::string table = human_table(bc, res);
  write_text_file((dir / "table.txt").string(), table);

  json rj{{"version", kVersion},
          {"config", json{{"scenario", scenario_to_json(bc.scenario, bc.replicates)},
                          {"solver", solver_to_json(bc.solver, bc.grid)},
                          {"methods", bc.methods},
                          {"classical_ridge", bc.classical_ridge},
                          {"pma_max_iter", bc.pma_max_iter},
                          {"threads", bc.threads}}},
          {"summaries", json::array()}};
  for (const auto& m : res.summaries)
    rj["summaries"].push_back(json{{"method", m.method},
                                   {"replicates_ok", m.replicates_ok},
                                   {"mean_corr", m.mean_corr},
                                   {"mean_loss_u", m.mean_loss_u},
                                   {"mean_loss_v", m.mean_loss_v},
                                   {"mean_f1_u", m.mean_f1_u},
                                   {"mean_f1_v", m.mean_f1_v}});
  write_json_file((dir / "result.json").string(), rj);

  std::cout << table;
  return 0;
}

struct ParetoOpts {
  std::string x_path, y_path, truth_path;
  std::string out_path = "pareto.csv";
  bool header = false;
  int points = 15;
  std::vector<double> fractions, grid_u, grid_v;
  std::vector<std::string> methods{"ours", "pma"};
  double alpha = 1.0;
  double tol = -1.0;
  int max_iter = -1;
  int outer_max_iter = -1;
  int pma_max_iter = 1000;
};

// Rebuilds the generating model from a truth.json written by simulate and
// cross-checks the stored vectors against the rebuild.
TruthSpec load_truth(const std::string& path, const Dataset& data) {
  const json tj = read_json_file(path);
  if (!tj.contains("scenario") || !tj.contains("truth_seed"))
    throw std::invalid_argument(
        "truth: expected a truth.json written by simulate (scenario + truth_seed)");
  ScenarioSpec sc = parse_scenario(tj["scenario"], nullptr);
  sc.seed = tj["truth_seed"].get<std::uint64_t>();
  TruthSpec truth = make_truth(sc);
  const Vector u_stored = vec_from_json(tj.at("u_true"), "truth u_true");
  const Vector v_stored = vec_from_json(tj.at("v_true"), "truth v_true");
  if (u_stored.size() != truth.u_true.size() || v_stored.size() != truth.v_true.size() ||
      (u_stored - truth.u_true).lpNorm<Eigen::Infinity>() > 1e-9 ||
      (v_stored - truth.v_true).lpNorm<Eigen::Infinity>() > 1e-9)
    throw std::invalid_argument("truth: stored vectors do not match their scenario rebuild");
  if (truth.u_true.size() != data.p || truth.v_true.size() != data.q)
    throw std::invalid_argument("truth: dimensions do not match the data");
  return truth;
}

int cmd_pareto(const ParetoOpts& o) {
  const Matrix Xraw = load_csv(o.x_path, o.header);
  const Matrix Yraw = load_csv(o.y_path, o.header);
  const Dataset data = make_dataset(Xraw, Yraw, ScaleMode::UnitVariance);

  ParetoConfig pc;
  pc.methods = o.methods;
  pc.pma_max_iter = o.pma_max_iter;
  pc.solver.alpha_x = o.alpha;
  pc.solver.alpha_y = o.alpha;
  if (o.tol > 0) {
    pc.solver.inner_tol = o.tol;
    pc.solver.outer_tol = o.tol;
  }
  if (o.max_iter > 0) pc.solver.inner_max_iter = o.max_iter;
  if (o.outer_max_iter > 0) pc.solver.outer_max_iter = o.outer_max_iter;
  pc.solver.validate();
  if (!o.grid_u.empty() || !o.grid_v.empty()) {
    pc.grid.absolute_u = o.grid_u;
    pc.grid.absolute_v = o.grid_v;
  } else if (!o.fractions.empty()) {
    pc.grid.fractions = o.fractions;
  } else {
    pc.grid.fractions = default_tau_fractions(o.points);
  }

  std::optional<TruthSpec> truth;
  if (!o.truth_path.empty()) truth = load_truth(o.truth_path, data);

  const std::vector<RunRecord> rows = pareto_sweep(data, pc, truth ? &*truth : nullptr);

  std::string s =
      "method,grid_index,tau_u,tau_v,sample_corr,population_corr,l1_sum,scaled_l1_sum,"
      "degenerate,failed,error\n";
  auto append_row = [&s](const RunRecord& r) {
    s += r.method + ',' + std::to_string(r.grid_index);
    s += ',' + fmt(r.tau_u) + ',' + fmt(r.tau_v);
    s += ',' + fmt(r.sample_corr) + ',' + fmt(r.population_corr);
    s += ',' + fmt(r.l1_sum) + ',' + fmt(r.scaled_l1_sum);
    s += r.degenerate ? ",1" : ",0";
    s += r.failed ? ",1" : ",0";
    s += ',' + csv_quote(r.error) + '\n';
  };
  for (const auto& r : rows) append_row(r);
  if (truth) {
    RunRecord t;
    t.method = "truth";
    t.population_corr = population_correlation(*truth, truth->u_true, truth->v_true);
    t.l1_sum = truth->u_true.lpNorm<1>() + truth->v_true.lpNorm<1>();
    t.scaled_l1_sum = t.l1_sum;
    try {
      t.sample_corr = sample_correlation(data.X, data.Y, truth->u_true, truth->v_true);
    } catch (const std::invalid_argument&) {
      t.degenerate = true;
    }
    append_row(t);
  }
  write_text_file(o.out_path, s);
  return 0;
}

int run_cli_impl(int argc, char** argv) {
  CLI::App app{"Sparse canonical correlation analysis toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  auto* sim = app.add_subcommand("simulate", "Draw datasets from a covariance scenario");
  std::string sim_config, sim_out;
  sim->add_option("--config", sim_config, "Scenario config (JSON)")->required();
  sim->add_option("--out", sim_out, "Output directory")->required();

  auto* slv = app.add_subcommand("solve", "Estimate sparse canonical pairs from CSV data");
  SolveOpts so;
  slv->add_option("--x", so.x_path, "X block CSV (n rows, p columns)")->required();
  slv->add_option("--y", so.y_path, "Y block CSV (n rows, q columns)")->required();
  slv->add_flag("--header", so.header, "Skip one header row in both CSVs");
  slv->add_option("--tau-u", so.tau_u, "l1 penalty on u");
  slv->add_option("--tau-v", so.tau_v, "l1 penalty on v");
  slv->add_option("--alpha", so.alpha, "Covariance bridge weight in [0,1], 1 = sample covariance");
  slv->add_option("--rank", so.rank, "Number of pairs (deflation depth)");
  slv->add_option("--init", so.init, "Start: auto, zeros, or file")
      ->check(CLI::IsMember({"auto", "zeros", "file"}));
  slv->add_option("--init-file", so.init_file, "JSON with arrays u and v (with --init file)");
  slv->add_option("--seed", so.seed, "Echoed into the result JSON");
  slv->add_option("--tol", so.tol, "Sets both inner and outer tolerances");
  slv->add_option("--max-iter", so.max_iter, "Inner iteration cap");
  slv->add_option("--outer-max-iter", so.outer_max_iter, "Outer alternation cap");
  slv->add_option("--out", so.out_path, "Result path (default solution.json)");

  auto* bm = app.add_subcommand("benchmark", "Replicated oracle-tau method comparison");
  std::string bm_config, bm_out;
  bm->add_option("--config", bm_config, "Experiment config (JSON)")->required();
  bm->add_option("--out-dir", bm_out, "Directory for records/summary/table outputs")->required();

  auto* pa = app.add_subcommand("pareto", "Correlation vs sparsity sweep on one dataset");
  ParetoOpts po;
  pa->add_option("--x", po.x_path, "X block CSV")->required();
  pa->add_option("--y", po.y_path, "Y block CSV")->required();
  pa->add_flag("--header", po.header, "Skip one header row in both CSVs");
  pa->add_option("--truth", po.truth_path, "truth.json from simulate, adds the true-pair row");
  pa->add_option("--points", po.points, "Size of the default fraction grid");
  pa->add_option("--fractions", po.fractions, "Relative tau grid (fractions of the dead zone)")
      ->delimiter(',');
  pa->add_option("--tau-grid-u", po.grid_u, "Absolute tau grid for u (paired with --tau-grid-v)")
      ->delimiter(',');
  pa->add_option("--tau-grid-v", po.grid_v, "Absolute tau grid for v")->delimiter(',');
  pa->add_option("--methods", po.methods, "Subset of ours,pma")->delimiter(',');
  pa->add_option("--alpha", po.alpha, "Covariance bridge weight");
  pa->add_option("--tol", po.tol, "Sets both inner and outer tolerances");
  pa->add_option("--max-iter", po.max_iter, "Inner iteration cap");
  pa->add_option("--outer-max-iter", po.outer_max_iter, "Outer alternation cap");
  pa->add_option("--pma-max-iter", po.pma_max_iter, "Alternation cap for the pma sweep");
  pa->add_option("--out", po.out_path, "Points CSV path (default pareto.csv)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  if (sim->parsed()) return cmd_simulate(sim_config, sim_out);
  if (slv->parsed()) return cmd_solve(so);
  if (bm->parsed()) return cmd_benchmark(bm_config, bm_out);
  if (pa->parsed()) return cmd_pareto(po);
  return 1;
}

}  // namespace

int run_cli(int argc, char** argv) {
  try {
    return run_cli_impl(argc, argv);
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace scca
