#include <doctest.h>

#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

// End-to-end runs of the installed binary. SCCA_CLI_BIN is injected by the
// build so the tests exercise the same executable a user gets.

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const fs::path kRoot = fs::temp_directory_path() / "scca_cli_suite";

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = kRoot / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string("\"") + SCCA_CLI_BIN + "\" " + args +
                          " > " + (kRoot / "last_out.log").string() + " 2> " +
                          (kRoot / "last_err.log").string();
  fs::create_directories(kRoot);
  const int rc = std::system(cmd.c_str());
  REQUIRE(rc != -1);
  REQUIRE(WIFEXITED(rc));
  return WEXITSTATUS(rc);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const fs::path& p, const std::string& body) {
  std::ofstream out(p, std::ios::binary);
  REQUIRE(out.good());
  out << body;
}

json slurp_json(const fs::path& p) { return json::parse(slurp(p)); }

std::string scenario_json(int replicates) {
  json j{{"scenario",
          {{"family", "identity"},
           {"n", 60},
           {"p", 8},
           {"q", 8},
           {"s_u", 2},
           {"s_v", 2},
           {"rho", 0.8},
           {"seed", 5},
           {"replicates", replicates}}}};
  return j.dump(2) + "\n";
}

// one simulated replicate shared by the solve/pareto cases
fs::path simulated_rep() {
  static fs::path rep;
  if (rep.empty()) {
    const fs::path dir = fresh_dir("data");
    spit(dir / "config.json", scenario_json(1));
    REQUIRE(run_cli("simulate --config " + (dir / "config.json").string() + " --out " +
                    (dir / "sim").string()) == 0);
    rep = dir / "sim" / "rep000";
  }
  return rep;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("bare invocation and parse errors exit 1, help and version exit 0") {
  fs::create_directories(kRoot);
  CHECK(run_cli("") == 1);
  CHECK(run_cli("--help") == 0);
  CHECK(run_cli("--version") == 0);
  CHECK(run_cli("solve") == 1);               // missing required --x/--y
  CHECK(run_cli("solve --help") == 0);
  CHECK(run_cli("frobnicate") == 1);          // unknown subcommand
}

TEST_CASE("simulate writes replicate trees deterministically") {
  const fs::path dir = fresh_dir("sim");
  spit(dir / "config.json", scenario_json(2));
  CHECK(run_cli("simulate --config " + (dir / "config.json").string() + " --out " +
                (dir / "a").string()) == 0);

  for (const char* rep : {"rep000", "rep001"}) {
    CHECK(fs::exists(dir / "a" / rep / "X.csv"));
    CHECK(fs::exists(dir / "a" / rep / "Y.csv"));
    CHECK(fs::exists(dir / "a" / rep / "truth.json"));
  }
  const json manifest = slurp_json(dir / "a" / "manifest.json");
  CHECK(manifest.at("replicates").size() == 2);

  const json truth = slurp_json(dir / "a" / "rep000" / "truth.json");
  CHECK(truth.at("family") == "identity");
  CHECK(truth.at("rho") == doctest::Approx(0.8));
  CHECK(truth.at("replicate") == 0);
  CHECK(truth.at("u_true").size() == 8);
  CHECK(truth.at("v_true").size() == 8);
  CHECK(truth.contains("seed"));
  // replicates draw different data
  CHECK(slurp(dir / "a" / "rep000" / "X.csv") != slurp(dir / "a" / "rep001" / "X.csv"));

  CHECK(run_cli("simulate --config " + (dir / "config.json").string() + " --out " +
                (dir / "b").string()) == 0);
  for (const char* f : {"rep000/X.csv", "rep000/Y.csv", "rep000/truth.json", "manifest.json"})
    CHECK(slurp(dir / "a" / f) == slurp(dir / "b" / f));
}

TEST_CASE("solve writes a solution and reruns byte-identically") {
  const fs::path rep = simulated_rep();
  const fs::path dir = fresh_dir("solve");
  const std::string base = "solve --x " + (rep / "X.csv").string() + " --y " +
                           (rep / "Y.csv").string() + " --tau-u 0.2 --tau-v 0.2 --seed 9";
  CHECK(run_cli(base + " --out " + (dir / "a.json").string()) == 0);
  const json sol = slurp_json(dir / "a.json");
  REQUIRE(sol.contains("pairs"));
  REQUIRE(sol.at("pairs").size() == 1);
  const json& pair = sol.at("pairs")[0];
  CHECK(pair.at("u_hat").size() == 8);
  CHECK(pair.at("v_hat").size() == 8);
  CHECK(!pair.at("zero_solution").get<bool>());
  CHECK(pair.at("converged").get<bool>());
  CHECK(std::abs(pair.at("sample_corr").get<double>()) <= 1.0);
  CHECK(sol.at("config").at("seed") == 9);

  CHECK(run_cli(base + " --out " + (dir / "b.json").string()) == 0);
  CHECK(slurp(dir / "a.json") == slurp(dir / "b.json"));
}

TEST_CASE("an overwhelming penalty yields the flagged zero solution, exit 0") {
  const fs::path rep = simulated_rep();
  const fs::path dir = fresh_dir("solve_zero");
  CHECK(run_cli("solve --x " + (rep / "X.csv").string() + " --y " + (rep / "Y.csv").string() +
                " --tau-u 1e9 --tau-v 1e9 --out " + (dir / "z.json").string()) == 0);
  const json sol = slurp_json(dir / "z.json");
  CHECK(sol.at("pairs")[0].at("zero_solution").get<bool>());
  CHECK(sol.at("pairs")[0].at("sample_corr") == 0.0);
}

TEST_CASE("rank 2 returns both pairs with orthogonality residuals") {
  const fs::path rep = simulated_rep();
  const fs::path dir = fresh_dir("solve_rank2");
  CHECK(run_cli("solve --x " + (rep / "X.csv").string() + " --y " + (rep / "Y.csv").string() +
                " --tau-u 0.1 --tau-v 0.1 --rank 2 --out " + (dir / "r2.json").string()) == 0);
  const json sol = slurp_json(dir / "r2.json");
  REQUIRE(sol.at("pairs").size() == 2);
  CHECK(sol.at("pairs")[0].at("orthogonality").at("u") == 0.0);  // nothing to deflate yet
  const double orth = sol.at("pairs")[1].at("orthogonality").at("u").get<double>();
  CHECK(orth >= 0.0);
  CHECK(orth <= 1e-3);
  // a rank beyond min(p, q) is a usage error
  CHECK(run_cli("solve --x " + (rep / "X.csv").string() + " --y " + (rep / "Y.csv").string() +
                " --rank 9 --out " + (dir / "bad.json").string()) == 1);
}

TEST_CASE("explicit starts: zeros stays at zero, file is read back") {
  const fs::path rep = simulated_rep();
  const fs::path dir = fresh_dir("solve_init");
  CHECK(run_cli("solve --x " + (rep / "X.csv").string() + " --y " + (rep / "Y.csv").string() +
                " --tau-u 0.2 --tau-v 0.2 --init zeros --out " + (dir / "z.json").string()) == 0);
  const json zsol = slurp_json(dir / "z.json");
  CHECK(zsol.at("pairs")[0].at("zero_solution").get<bool>());

  json init{{"u", json::array()}, {"v", json::array()}};
  for (int i = 0; i < 8; ++i) {
    init["u"].push_back(i == 0 ? 1.0 : 0.0);
    init["v"].push_back(i == 1 ? 1.0 : 0.0);
  }
  spit(dir / "init.json", init.dump() + "\n");
  CHECK(run_cli("solve --x " + (rep / "X.csv").string() + " --y " + (rep / "Y.csv").string() +
                " --tau-u 0.2 --tau-v 0.2 --init file --init-file " +
                (dir / "init.json").string() + " --out " + (dir / "f.json").string()) == 0);
  CHECK(!slurp_json(dir / "f.json").at("pairs")[0].at("zero_solution").get<bool>());
  // --init file without the path is a usage error
  CHECK(run_cli("solve --x " + (rep / "X.csv").string() + " --y " + (rep / "Y.csv").string() +
                " --init file --out " + (dir / "g.json").string()) == 1);
}

TEST_CASE("benchmark writes the four outputs and is deterministic") {
  const fs::path dir = fresh_dir("bench");
  json cfg{{"scenario",
            {{"family", "identity"},
             {"n", 60},
             {"p", 8},
             {"q", 8},
             {"s_u", 2},
             {"s_v", 2},
             {"rho", 0.8},
             {"seed", 11},
             {"replicates", 2}}},
           {"solver", {{"tau_fractions", {0.1, 0.4}}, {"tol", 1e-5}}},
           {"methods", {"ours", "pma", "classical"}},
           {"threads", 1}};
  spit(dir / "config.json", cfg.dump(2) + "\n");
  CHECK(run_cli("benchmark --config " + (dir / "config.json").string() + " --out-dir " +
                (dir / "a").string()) == 0);
  for (const char* f : {"records.csv", "summary.csv", "table.txt", "result.json"})
    CHECK(fs::exists(dir / "a" / f));

  const std::string records = slurp(dir / "a" / "records.csv");
  CHECK(records.rfind("rep,method,grid_index,tau_u,tau_v", 0) == 0);
  // 2 reps x (2 ours + 2 pma + 1 classical) data rows
  CHECK(std::count(records.begin(), records.end(), '\n') == 1 + 2 * 5);
  const json result = slurp_json(dir / "a" / "result.json");
  CHECK(result.at("summaries").size() == 3);
  const std::string table = slurp(dir / "a" / "table.txt");
  CHECK(table.find("method") != std::string::npos);
  CHECK(table.find("ours") != std::string::npos);

  CHECK(run_cli("benchmark --config " + (dir / "config.json").string() + " --out-dir " +
                (dir / "b").string()) == 0);
  for (const char* f : {"records.csv", "summary.csv", "table.txt", "result.json"})
    CHECK(slurp(dir / "a" / f) == slurp(dir / "b" / f));
}

TEST_CASE("config mistakes are usage errors") {
  const fs::path dir = fresh_dir("badcfg");

  json zero_reps = json::parse(scenario_json(0));
  spit(dir / "zero.json", zero_reps.dump() + "\n");
  CHECK(run_cli("benchmark --config " + (dir / "zero.json").string() + " --out-dir " +
                (dir / "out").string()) == 1);
  CHECK(run_cli("simulate --config " + (dir / "zero.json").string() + " --out " +
                (dir / "out").string()) == 1);

  json bad_blocks{{"scenario",
                   {{"family", "block_toeplitz"},
                    {"n", 60},
                    {"p", 7},
                    {"q", 10},
                    {"s_u", 1},
                    {"s_v", 1},
                    {"rho", 0.5},
                    {"seed", 1},
                    {"blocks", 5}}}};
  spit(dir / "blocks.json", bad_blocks.dump() + "\n");
  CHECK(run_cli("simulate --config " + (dir / "blocks.json").string() + " --out " +
                (dir / "out").string()) == 1);

  json typo = json::parse(scenario_json(2));
  typo["scenario"]["sigma"] = 3;
  spit(dir / "typo.json", typo.dump() + "\n");
  CHECK(run_cli("simulate --config " + (dir / "typo.json").string() + " --out " +
                (dir / "out").string()) == 1);

  spit(dir / "mangled.json", "{not json\n");
  CHECK(run_cli("simulate --config " + (dir / "mangled.json").string() + " --out " +
                (dir / "out").string()) == 1);

  CHECK(run_cli("simulate --config " + (dir / "missing.json").string() + " --out " +
                (dir / "out").string()) == 1);
  CHECK(run_cli("solve --x no_such.csv --y also_missing.csv") == 1);
}

TEST_CASE("pareto sweeps one dataset and appends the true pair last") {
  const fs::path rep = simulated_rep();
  const fs::path dir = fresh_dir("pareto");
  const std::string base = "pareto --x " + (rep / "X.csv").string() + " --y " +
                           (rep / "Y.csv").string() + " --truth " +
                           (rep / "truth.json").string() +
                           " --fractions 0.1,0.3 --methods ours,pma --tol 1e-5";
  CHECK(run_cli(base + " --out " + (dir / "a.csv").string()) == 0);
  const std::string csv = slurp(dir / "a.csv");
  CHECK(csv.rfind("method,grid_index", 0) == 0);
  std::vector<std::string> lines;
  std::istringstream ss(csv);
  for (std::string line; std::getline(ss, line);)
    if (!line.empty()) lines.push_back(line);
  REQUIRE(lines.size() == 1 + 2 + 2 + 1);  // header, ours x2, pma x2, truth
  CHECK(lines[1].rfind("ours,", 0) == 0);
  CHECK(lines[3].rfind("pma,", 0) == 0);
  CHECK(lines.back().rfind("truth,", 0) == 0);

  CHECK(run_cli(base + " --out " + (dir / "b.csv").string()) == 0);
  CHECK(slurp(dir / "a.csv") == slurp(dir / "b.csv"));

  // a truth file inconsistent with its own scenario seed is rejected
  json tampered = slurp_json(rep / "truth.json");
  tampered["u_true"][0] = tampered["u_true"][0].get<double>() + 0.5;
  spit(dir / "tampered.json", tampered.dump() + "\n");
  CHECK(run_cli("pareto --x " + (rep / "X.csv").string() + " --y " + (rep / "Y.csv").string() +
                " --truth " + (dir / "tampered.json").string() + " --fractions 0.2 --out " +
                (dir / "c.csv").string()) == 1);
}

}  // TEST_SUITE
