#include <doctest.h>

#include <cmath>

#include "oracle.hpp"
#include "scca/admm.hpp"
#include "scca/linop.hpp"
#include "scca/rng.hpp"

using namespace scca;

namespace {

// data-scaled random instance: A ~ N(0,1)/sqrt(n), c ~ N(0,1)
struct Instance {
  Matrix a;
  Vector c;
};

Instance random_instance(Rng& rng, int n, int p) {
  Instance inst;
  inst.a = rng.normal_matrix(n, p) / std::sqrt(static_cast<double>(n));
  inst.c = rng.normal_vector(p);
  return inst;
}

}  // namespace

TEST_SUITE("admm") {

TEST_CASE("zero linear term gives the zero solution") {
  Rng rng(41);
  const Matrix a = rng.normal_matrix(20, 6) / std::sqrt(20.0);
  const LinearOperator A = make_operator(a);
  const SolverConfig cfg;
  const AdmmState st = solve_subproblem(A, Vector::Zero(6), 0.3, cfg);
  CHECK(st.u.lpNorm<Eigen::Infinity>() == 0.0);
  CHECK(st.iter >= 1);
}

TEST_CASE("identity operator with tau 0 maximizes along c on the sphere") {
  const Matrix eye = Matrix::Identity(3, 3);
  const LinearOperator A = make_operator(eye);
  Vector c(3);
  c << 2.0, 0.0, 0.0;
  const SolverConfig cfg;
  const AdmmState st = solve_subproblem(A, c, 0.0, cfg);
  CHECK(st.u[0] == doctest::Approx(1.0).epsilon(1e-4));
  CHECK(std::abs(st.u[1]) <= 1e-4);
  CHECK(std::abs(st.u[2]) <= 1e-4);
}

TEST_CASE("objective matches the enumeration oracle on a tiny instance") {
  Rng rng(42);
  const Instance inst = random_instance(rng, 50, 5);
  const LinearOperator A = make_operator(inst.a);
  SolverConfig cfg;
  cfg.inner_tol = 1e-8;
  cfg.inner_max_iter = 20000;
  const double tau = 0.5;
  const AdmmState st = solve_subproblem(A, inst.c, tau, cfg);

  const auto ref = oracle::solve_ball_l1_enumeration(inst.a, inst.c, tau);
  REQUIRE(ref.found);
  const double got = oracle::l1_objective(inst.c, tau, st.u);
  CHECK(std::abs(got - ref.objective) <= 1e-4);

  // slow independent descent agrees loosely
  const double sub = oracle::subgradient_best_objective(inst.a, inst.c, tau, 20000);
  CHECK(std::abs(sub - ref.objective) <= 1e-2);

  // audit the converged state
  CHECK(kkt_residual(A, inst.c, tau, st.u, st.z, st.xi) <= 10.0 * cfg.inner_tol);
}

TEST_CASE("kkt residual is zero at the exact zero solution") {
  Rng rng(43);
  const Matrix a = rng.normal_matrix(15, 4) / std::sqrt(15.0);
  const LinearOperator A = make_operator(a);
  const double r = kkt_residual(A, Vector::Zero(4), 0.5, Vector::Zero(4), Vector::Zero(15),
                                Vector::Zero(15));
  CHECK(r <= 1e-10);
}

TEST_CASE("kkt residual flags a perturbed solution") {
  Rng rng(44);
  const Instance inst = random_instance(rng, 40, 5);
  const LinearOperator A = make_operator(inst.a);
  SolverConfig cfg;
  const AdmmState st = solve_subproblem(A, inst.c, 0.4, cfg);
  Vector bad = st.u;
  bad[0] += 0.1;
  CHECK(kkt_residual(A, inst.c, 0.4, bad, st.z, st.xi) > cfg.inner_tol);
}

TEST_CASE("residual history decays loosely and exits feasible") {
  Rng rng(45);
  for (int trial = 0; trial < 5; ++trial) {
    const Instance inst = random_instance(rng, 30 + 5 * trial, 4 + trial);
    const LinearOperator A = make_operator(inst.a);
    SolverConfig cfg;
    cfg.inner_tol = 1e-9;
    cfg.inner_max_iter = 20000;
    const AdmmState st = solve_subproblem(A, inst.c, 0.3, cfg);
    REQUIRE(st.primal_history.size() >= 2);
    const std::size_t mid = st.primal_history.size() / 2;
    CHECK(st.primal_history.back() <= 10.0 * st.primal_history[mid] + 1e-12);

    Vector au(A.rows);
    A.apply(st.u, au);
    CHECK(au.head(A.ball_rows).norm() <= 1.0 + 1e-6);
  }
}

TEST_CASE("warm restart from a converged state stops immediately") {
  Rng rng(46);
  const Instance inst = random_instance(rng, 40, 6);
  const LinearOperator A = make_operator(inst.a);
  const SolverConfig cfg;
  const AdmmState st = solve_subproblem(A, inst.c, 0.3, cfg);
  const AdmmState again = solve_subproblem(A, inst.c, 0.3, cfg, st);
  CHECK(again.iter <= 5);
  // the restart may polish u, but only within the tolerance it converged at
  CHECK((again.u - st.u).lpNorm<Eigen::Infinity>() <= 10.0 * cfg.inner_tol);
}

TEST_CASE("argument validation") {
  Rng rng(47);
  const Matrix a = rng.normal_matrix(10, 3);
  const LinearOperator A = make_operator(a);
  const SolverConfig cfg;
  CHECK_THROWS_AS(solve_subproblem(A, Vector::Zero(4), 0.1, cfg), std::invalid_argument);
  CHECK_THROWS_AS(solve_subproblem(A, Vector::Zero(3), -0.1, cfg), std::invalid_argument);
  AdmmState warm;
  warm.u = Vector::Zero(2);
  warm.z = Vector::Zero(10);
  warm.xi = Vector::Zero(10);
  CHECK_THROWS_AS(solve_subproblem(A, Vector::Zero(3), 0.1, cfg, warm), std::invalid_argument);
}

TEST_CASE("augmented split keeps pinned rows at zero") {
  Rng rng(48);
  const Matrix x = rng.normal_matrix(25, 6) / 5.0;
  Matrix b(1, 6);
  b = rng.normal_vector(6).transpose();
  const LinearOperator A = make_deflation_operator(x, b);
  Vector c = rng.normal_vector(6);
  SolverConfig cfg;
  cfg.inner_tol = 1e-8;
  cfg.inner_max_iter = 20000;
  const AdmmState st = solve_subproblem(A, c, 0.05, cfg);
  CHECK(st.z.tail(1).lpNorm<Eigen::Infinity>() == 0.0);
  Vector au(A.rows);
  A.apply(st.u, au);
  // the pinned row tracks the primal residual scale
  CHECK(au.tail(1).lpNorm<Eigen::Infinity>() <= 1e-6);
  CHECK(au.head(A.ball_rows).norm() <= 1.0 + 1e-6);
}

}  // TEST_SUITE
