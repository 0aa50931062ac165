#include <cmath>

#include "doctest.h"
#include "lhylab/common.hpp"
#include "lhylab/scattering.hpp"

using namespace lhy;

TEST_CASE("closed-form value frozen against an independent evaluation") {
  PotentialParams p{0.1, 1.0};
  const ScatteringSolution s =
      scattering_length(p, ScatteringMethod::closed_form_oracle);
  CHECK(s.a.value == doctest::Approx(0.09697793123963883).epsilon(1e-13));
  CHECK(s.z0 == doctest::Approx(std::sqrt(0.2)).epsilon(1e-14));
}

TEST_CASE("shooting solver matches the closed form across couplings") {
  for (double ratio : {0.01, 0.1, 0.5}) {
    PotentialParams p{ratio, 1.0};
    const double oracle =
        scattering_length(p, ScatteringMethod::closed_form_oracle).a.value;
    const double shot = scattering_length(p, ScatteringMethod::shooting).a.value;
    CHECK(std::abs(shot - oracle) / std::abs(oracle) < 1e-8);
  }
}

TEST_CASE("series coefficients in closed form") {
  PotentialParams p{0.2, 0.7};
  const auto c = born_coefficients(p, 2);
  REQUIRE(c.size() == 3);
  CHECK(c[0] == doctest::Approx(p.a0).epsilon(1e-14));
  CHECK(c[1] ==
        doctest::Approx(-(5.0 / 16.0) * p.a0 * p.a0 / p.R0).epsilon(1e-12));
  CHECK(c[2] == doctest::Approx((23.0 / 216.0) * p.a0 * p.a0 * p.a0 /
                                (p.R0 * p.R0))
                    .epsilon(1e-12));
  // the series-summed method returns exactly the partial sums
  const double series = scattering_length(p, ScatteringMethod::born).a.value;
  CHECK(series == doctest::Approx(c[0] + c[1] + c[2]).epsilon(1e-14));
}

TEST_CASE("second-order kernel integral: quadrature vs closed form") {
  for (auto [a0, R0] : {std::pair{0.1, 1.0}, {0.3, 0.5}, {2.0, 3.0}}) {
    PotentialParams p{a0, R0};
    const ValErr q = born_kernel_integral_quadrature(p);
    const double cf = born_kernel_integral_closed_form(p);
    CHECK(cf == doctest::Approx(40.0 * std::pow(PI, 4) * a0 * a0 / R0)
                    .epsilon(1e-14));
    CHECK(std::abs(q.value - cf) / cf < 1e-10);
  }
}

TEST_CASE("departure from first order scales quadratically") {
  // |a - (a0 + a1)| / a0 = O((a0/R0)^2): ratios at w and w/10 differ by ~100
  auto defect = [](double ratio) {
    PotentialParams p{ratio, 1.0};
    const double a =
        scattering_length(p, ScatteringMethod::closed_form_oracle).a.value;
    const auto c = born_coefficients(p, 2);
    return std::abs(a - (c[0] + c[1])) / p.a0;
  };
  const double d1 = defect(0.1), d2 = defect(0.01);
  const double scale = d1 / d2;  // expect ~100
  CHECK(scale > 50.0);
  CHECK(scale < 200.0);
}

TEST_CASE("validation of potential parameters") {
  CHECK_THROWS(scattering_length({0.0, 1.0}, ScatteringMethod::shooting));
  CHECK_THROWS(scattering_length({0.1, 0.0}, ScatteringMethod::shooting));
}
