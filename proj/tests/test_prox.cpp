#include <doctest.h>

#include <cmath>

#include "scca/prox.hpp"
#include "scca/rng.hpp"

using namespace scca;

TEST_SUITE("prox") {

TEST_CASE("prox_f shifts past the threshold") {
  // x + mu*c = 2 with mu*tau = 0.5 lands at 1.5
  Vector x(1), c(1);
  x << 1.0;
  c << 1.0;
  const Vector out = prox_f(x, ProxFParams{c, 1.0, 0.5});
  CHECK(out[0] == doctest::Approx(1.5).epsilon(1e-15));
}

TEST_CASE("prox_f of zero input is zero") {
  const Vector x = Vector::Zero(4);
  const Vector c = Vector::Zero(4);
  for (double tau : {0.0, 0.5, 3.0}) {
    const Vector out = prox_f(x, ProxFParams{c, 0.7, tau});
    CHECK(out.norm() == 0.0);
  }
}

TEST_CASE("prox_f kills entries inside the dead zone") {
  Vector x(1), c(1);
  x << -0.3;
  c << 0.0;
  const Vector out = prox_f(x, ProxFParams{c, 1.0, 0.5});
  CHECK(out[0] == 0.0);
}

TEST_CASE("prox_f satisfies the subgradient conditions") {
  Rng rng(101);
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const int p = 1 + static_cast<int>(rng.below(12));
    const Vector x = 2.0 * rng.normal_vector(p);
    const Vector c = rng.normal_vector(p);
    const double mu = 0.05 + rng.uniform();
    const double tau = rng.uniform();
    const Vector u = prox_f(x, ProxFParams{c, mu, tau});
    for (int i = 0; i < p; ++i) {
      const double t = x[i] + mu * c[i];
      if (u[i] != 0.0) {
        const double sign = u[i] > 0.0 ? 1.0 : -1.0;
        worst = std::max(worst, std::abs(u[i] - t + mu * tau * sign));
      } else {
        worst = std::max(worst, std::max(0.0, std::abs(t) - mu * tau));
      }
    }
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("prox_f is nonexpansive in x") {
  Rng rng(102);
  for (int trial = 0; trial < 50; ++trial) {
    const int p = 1 + static_cast<int>(rng.below(10));
    const Vector c = rng.normal_vector(p);
    const ProxFParams params{c, 0.3 + rng.uniform(), rng.uniform()};
    const Vector x1 = rng.normal_vector(p);
    const Vector x2 = rng.normal_vector(p);
    CHECK((prox_f(x1, params) - prox_f(x2, params)).norm() <= (x1 - x2).norm() + 1e-14);
  }
}

TEST_CASE("prox_f rejects dimension mismatch") {
  Vector x(3), c(2);
  x.setZero();
  c.setZero();
  CHECK_THROWS_AS(prox_f(x, ProxFParams{c, 1.0, 0.0}), std::invalid_argument);
}

TEST_CASE("prox_g leaves interior points alone") {
  Vector z(2);
  z << 0.3, 0.4;
  CHECK((prox_g(z) - z).norm() == 0.0);
}

TEST_CASE("prox_g projects radially") {
  Vector z(2);
  z << 3.0, 4.0;
  const Vector out = prox_g(z);
  CHECK(out[0] == doctest::Approx(0.6).epsilon(1e-15));
  CHECK(out[1] == doctest::Approx(0.8).epsilon(1e-15));
}

TEST_CASE("prox_g fixes the origin") {
  CHECK(prox_g(Vector::Zero(5)).norm() == 0.0);
}

TEST_CASE("prox_g stays in the ball and is idempotent") {
  Rng rng(103);
  for (int trial = 0; trial < 100; ++trial) {
    const Vector z = 3.0 * rng.normal_vector(1 + static_cast<int>(rng.below(8)));
    const Vector out = prox_g(z);
    CHECK(out.norm() <= 1.0 + 1e-15);
    CHECK((prox_g(out) - out).norm() <= 1e-15);
  }
}

TEST_CASE("prox_g_augmented projects the head and zeroes the tail") {
  Vector z(3);
  z << 3.0, 4.0, 7.0;
  const Vector out = prox_g_augmented(z, 2);
  CHECK(out[0] == doctest::Approx(0.6).epsilon(1e-15));
  CHECK(out[1] == doctest::Approx(0.8).epsilon(1e-15));
  CHECK(out[2] == 0.0);

  Vector ok(3);
  ok << 0.1, 0.2, 0.0;
  CHECK((prox_g_augmented(ok, 2) - ok).norm() == 0.0);

  Vector tail(3);
  tail << 0.0, 0.0, 5.0;
  CHECK(prox_g_augmented(tail, 2).norm() == 0.0);
}

TEST_CASE("prox_g_augmented validates the split point") {
  CHECK_THROWS_AS(prox_g_augmented(Vector::Zero(2), 3), std::invalid_argument);
}

}  // TEST_SUITE
