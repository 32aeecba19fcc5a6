#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "scca/baselines.hpp"
#include "scca/metrics.hpp"
#include "scca/rng.hpp"
#include "scca/simulation.hpp"

using namespace scca;

TEST_SUITE("baselines") {

TEST_CASE("identical blocks give a perfect first correlation") {
  Rng rng(61);
  const Matrix raw = rng.normal_matrix(50, 4);
  const Matrix x = center_scale(raw, ScaleMode::UnitVariance);
  const auto triples = classical_cca(x, x, 1, 0.0);
  REQUIRE(triples.size() == 1);
  CHECK(triples[0].rho == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(loss(triples[0].u, triples[0].v) <= 1e-8);
}

TEST_CASE("independent blocks give a weak first correlation") {
  for (std::uint64_t seed : {1u, 2u, 3u, 4u, 5u}) {
    Rng rng(seed);
    const Dataset d = make_dataset(rng.normal_matrix(2000, 5), rng.normal_matrix(2000, 5),
                                   ScaleMode::UnitVariance);
    const auto triples = classical_cca(d.X, d.Y, 1, 0.0);
    CHECK(triples[0].rho <= 0.3);
    CHECK(triples[0].rho >= 0.0);
  }
}

TEST_CASE("classical estimate approaches the planted correlation at large n") {
  ScenarioSpec sc;
  sc.family = CovFamily::Identity;
  sc.n = 5000;
  sc.p = 5;
  sc.q = 5;
  sc.s_u = 2;
  sc.s_v = 2;
  sc.rho = 0.6;
  sc.seed = 62;
  const TruthSpec truth = make_truth(sc);
  const Dataset raw = sample_joint(truth, sc.n, 63);
  const Dataset d = make_dataset(raw.X, raw.Y, ScaleMode::UnitVariance);
  const auto triples = classical_cca(d.X, d.Y, 1, 0.0);
  CHECK(std::abs(triples[0].rho - sc.rho) <= 0.05);
  CHECK(loss(triples[0].u, truth.u_true) <= 0.1);
}

TEST_CASE("whitened singular values are valid correlations, sorted") {
  Rng rng(64);
  const Dataset d =
      make_dataset(rng.normal_matrix(100, 6), rng.normal_matrix(100, 4), ScaleMode::UnitVariance);
  const auto triples = classical_cca(d.X, d.Y, 10, 0.0);  // k clamps to min(p, q)
  REQUIRE(triples.size() == 4);
  for (std::size_t i = 0; i < triples.size(); ++i) {
    CHECK(triples[i].rho >= -1e-8);
    CHECK(triples[i].rho <= 1.0 + 1e-8);
    if (i > 0) CHECK(triples[i].rho <= triples[i - 1].rho + 1e-12);
  }
}

TEST_CASE("singular Gram matrix demands a ridge") {
  Rng rng(65);
  // p > n makes X'X singular
  const Matrix x = center_scale(rng.normal_matrix(10, 20), ScaleMode::UnitVariance);
  const Matrix y = center_scale(rng.normal_matrix(10, 6), ScaleMode::UnitVariance);
  CHECK_THROWS_AS(classical_cca(x, y, 1, 0.0), std::invalid_argument);
  CHECK_NOTHROW(classical_cca(x, y, 1, 1e-3));
}

TEST_CASE("pma with no penalty is the leading singular pair") {
  Rng rng(66);
  const Dataset d =
      make_dataset(rng.normal_matrix(80, 7), rng.normal_matrix(80, 6), ScaleMode::UnitVariance);
  const CcaSolution sol = pma_cca(d.X, d.Y, 0.0, 0.0, 500);
  const Matrix c = d.X.transpose() * d.Y;
  Eigen::BDCSVD<Matrix> svd(c, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector u1 = svd.matrixU().col(0);
  const Vector v1 = svd.matrixV().col(0);
  CHECK(loss(sol.u_hat, u1) <= 1e-6);
  CHECK(loss(sol.v_hat, v1) <= 1e-6);
}

TEST_CASE("pma iterates live in the unit ball and obey the sign fix") {
  Rng rng(67);
  const Dataset d =
      make_dataset(rng.normal_matrix(60, 8), rng.normal_matrix(60, 8), ScaleMode::UnitVariance);
  const Matrix c = d.X.transpose() * d.Y;
  const double top = c.cwiseAbs().maxCoeff();
  for (double frac : {0.0, 0.2, 0.5}) {
    const CcaSolution sol = pma_cca(d.X, d.Y, frac * top, frac * top, 500);
    CHECK(sol.u_hat.norm() <= 1.0 + 1e-12);
    CHECK(sol.v_hat.norm() <= 1.0 + 1e-12);
    if (!sol.zero_solution) {
      Eigen::Index at = 0;
      sol.u_hat.cwiseAbs().maxCoeff(&at);
      CHECK(sol.u_hat[at] >= 0.0);
    }
  }
}

TEST_CASE("pma over-threshold returns the flagged zero solution") {
  Rng rng(68);
  const Dataset d =
      make_dataset(rng.normal_matrix(40, 5), rng.normal_matrix(40, 5), ScaleMode::UnitVariance);
  const CcaSolution sol = pma_cca(d.X, d.Y, 1e3, 1e3, 100);
  CHECK(sol.zero_solution);
  CHECK(sol.u_hat.norm() == 0.0);
  CHECK(sol.v_hat.norm() == 0.0);
}

TEST_CASE("pma reports the metric-consistent sample correlation") {
  Rng rng(69);
  const Dataset d =
      make_dataset(rng.normal_matrix(70, 6), rng.normal_matrix(70, 6), ScaleMode::UnitVariance);
  const CcaSolution sol = pma_cca(d.X, d.Y, 0.05, 0.05, 500);
  REQUIRE(!sol.zero_solution);
  CHECK(sol.sample_corr ==
        doctest::Approx(sample_correlation(d.X, d.Y, sol.u_hat, sol.v_hat)).epsilon(1e-12));
}

}  // TEST_SUITE
