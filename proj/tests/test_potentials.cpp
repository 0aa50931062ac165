#include <cmath>

#include "doctest.h"
#include "lhylab/common.hpp"
#include "lhylab/potentials.hpp"

using namespace lhy;

TEST_CASE("interaction shape at k = 0 and scaling identity") {
  PotentialParams p{0.3, 2.0};
  CHECK(nu_hat(0.0, p) == doctest::Approx(8.0 * PI * p.a0).epsilon(1e-14));
  CHECK(nu_hat(1.0 / p.R0, p) == doctest::Approx(2.0 * PI * p.a0).epsilon(1e-14));
  // nu_hat = (a0/R0^3) v_hat_{R0}
  for (double k : {0.0, 0.7, 3.1}) {
    CHECK(nu_hat(k, p) ==
          doctest::Approx(p.a0 / (p.R0 * p.R0 * p.R0) * v_hat_R(k, p.R0))
              .epsilon(1e-13));
  }
  CHECK(v_hat_R(0.0, 0.5) == doctest::Approx(8.0 * PI * 0.125).epsilon(1e-14));
}

TEST_CASE("smooth step endpoints, monotonicity, derivative") {
  CHECK(smoothstep(-0.1) == 0.0);
  CHECK(smoothstep(0.0) == 0.0);
  CHECK(smoothstep(1.0) == 1.0);
  CHECK(smoothstep(1.5) == 1.0);
  double prev = 0.0;
  for (int i = 1; i <= 20; ++i) {
    const double v = smoothstep(i / 20.0);
    CHECK(v >= prev);
    prev = v;
  }
  const double s = 0.37, h = 1e-6;
  const double fd = (smoothstep(s + h) - smoothstep(s - h)) / (2 * h);
  CHECK(smoothstep_deriv(s) == doctest::Approx(fd).epsilon(1e-6));
}

TEST_CASE("per-axis bump: plateau, ramp, support") {
  const double t = 0.1;
  CHECK(chi1(0.0, t) == 1.0);
  CHECK(chi1(0.39, t) == 1.0);             // plateau ends at (1-2t)/2 = 0.40
  CHECK(chi1(-0.39, t) == chi1(0.39, t));  // even
  const double mid = chi1(0.425, t);
  CHECK(mid > 0.0);
  CHECK(mid < 1.0);
  CHECK(chi1(0.4501, t) == 0.0);           // zero from (1-t)/2 = 0.45
  const double s = 0.42, h = 1e-6;
  const double fd = (chi1(s + h, t) - chi1(s - h, t)) / (2 * h);
  CHECK(chi1_deriv(s, t) == doctest::Approx(fd).epsilon(1e-5));
}

TEST_CASE("localization profile invariants") {
  const LocalizationProfile lp = localization_profiles(0.1);
  CHECK(lp.h1(0.0) == 1.0);
  CHECK(lp.supp == doctest::Approx(0.9).epsilon(1e-14));
  CHECK(lp.h1(0.91) == 0.0);
  CHECK(lp.gamma ==
        doctest::Approx(1.0 / (lp.norm_chi2 * lp.norm_chi2 * lp.norm_chi2))
            .epsilon(1e-13));
  CHECK(lp.c2 > 0.0);

  // complement channel agrees with the direct difference away from r = 0
  for (double r : {0.05, 0.2, 0.5, 0.8}) {
    CHECK(lp.one_minus_h1(r) == doctest::Approx(1.0 - lp.h1(r)).epsilon(1e-10));
    CHECK(lp.h1(r) >= 0.0);
    CHECK(lp.h1(r) <= 1.0);
  }

  // curvature at the origin: 1 - h1(r) -> (c2/2) r^2
  const double d = 1e-3;
  CHECK(lp.one_minus_h1(d) / (d * d) ==
        doctest::Approx(0.5 * lp.c2).epsilon(2e-3));

  // product structure across directions
  for (double r : {0.12, 0.6}) {
    const double z = r / std::sqrt(3.0);
    CHECK(lp.h_diag(r) == doctest::Approx(lp.h3(z, z, z)).epsilon(1e-12));
    const double h = lp.h1(z);
    CHECK(lp.h_diag(r) == doctest::Approx(h * h * h).epsilon(1e-10));
    CHECK(lp.h3(r, 0.0, 0.0) == doctest::Approx(lp.h1(r)).epsilon(1e-12));
  }
}

TEST_CASE("profile rejects out-of-range ramp parameters") {
  CHECK_THROWS(localization_profiles(0.0));
  CHECK_THROWS(localization_profiles(0.5));
  CHECK_THROWS(localization_profiles(-0.2));
}
