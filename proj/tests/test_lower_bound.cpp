#include <array>
#include <cmath>

#include "doctest.h"
#include "lhylab/common.hpp"
#include "lhylab/lower_bound.hpp"
#include "lhylab/potentials.hpp"

using namespace lhy;

TEST_CASE("sliding kernel transform: positivity flips with the decay rate") {
  const LocalizationProfile lp = localization_profiles(0.1);
  SlidingKernelParams sk;
  sk.lp = &lp;
  sk.omega = 2.0;

  sk.nu = 1000.0;  // far above any measured threshold at t = 0.1
  const KernelTransform hi = sliding_kernel_transform(sk);
  CHECK(hi.F0 > 0.0);
  CHECK(hi.min_F > 0.0);
  CHECK(hi.min_F_diag > 0.0);

  sk.nu = 2.0;  // far below it
  const KernelTransform lo = sliding_kernel_transform(sk);
  CHECK(lo.min_F < 0.0);
}

TEST_CASE("threshold estimation returns a finite constant") {
  const C1Estimate est = estimate_c1(0.1, {0.5, 2.0}, {1.0, 10.0, 100.0,
                                                       1000.0, 10000.0});
  CHECK(est.finite);
  CHECK(est.C1 > 0.0);
  REQUIRE(est.omegas.size() == 2);
  REQUIRE(est.thresholds.size() == 2);
  for (double th : est.thresholds) CHECK(th > 0.0);
}

TEST_CASE("translation-average identity at deterministic offsets") {
  const LocalizationProfile lp = localization_profiles(0.1);
  const double R0 = 0.08, R = 0.06;
  const std::array<std::array<double, 3>, 3> xs = {
      {{0.10, 0.00, -0.05}, {-0.20, 0.15, 0.02}, {0.00, 0.00, 0.00}}};
  const std::array<std::array<double, 3>, 3> dys = {
      {{0.05, 0.02, -0.01}, {-0.03, 0.00, 0.04}, {0.10, -0.06, 0.02}}};
  for (int i = 0; i < 3; ++i) {
    std::array<double, 3> y{};
    for (int j = 0; j < 3; ++j) y[j] = xs[i][j] + dys[i][j];
    const double res = averaging_identity_residual(xs[i], y, lp, R, R0);
    CHECK(res <= 1e-6);
  }
}

TEST_CASE("dropped-terms integral obeys its own bound chain") {
  const double y = 1e-6, d = 0.01, b = 0.035, t = 0.1;
  const GasParams g = gas_params(y, d);
  const double ell = std::pow(y, -0.5 - b);
  const double n = g.rho * ell * ell * ell;
  const LowerBoundKernels lb = lower_bound_integral(g.rho, g.p, ell, t, n, 0.5);

  CHECK(lb.fg_ok);
  CHECK(lb.pointwise_worst <= 1e-10);
  CHECK(lb.I.value >= 0.0);
  // crude bound: I <= (1/2rho) int g, quadrature agrees with closed form
  CHECK(std::abs(lb.crude_quadrature.value - lb.crude_bound) /
            lb.crude_bound <
        1e-8);
  CHECK(lb.I.value <= lb.crude_bound * (1.0 + 1e-9) + lb.I.err);
  // split bound dominates the integral
  CHECK(lb.I.value <= lb.chain_bound + lb.I.err);
  CHECK(lb.low_part.value >= 0.0);
  CHECK(lb.high_part.value >= 0.0);
}

TEST_CASE("a-priori thresholds in the neutral configuration") {
  const double y = 1e-6, d = 0.01, b = 0.035, t = 0.1;
  const GasParams g = gas_params(y, d);
  const double ell = std::pow(y, -0.5 - b);
  const double n = g.rho * ell * ell * ell;
  const AprioriReport ap = apriori_thresholds(g.rho, g.p, ell, t, n);
  CHECK(ap.n_threshold == doctest::Approx(g.rho * ell * ell * ell / 4.0)
                              .epsilon(1e-12));
  CHECK_FALSE(ap.nonneg);  // neutral n is far above the quarter threshold
  CHECK(ap.regime_ok);     // depletion scale below one in this regime
  CHECK(ap.depletion_scale > 0.0);
  CHECK(ap.depletion_scale < 1.0);
}
