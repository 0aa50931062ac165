#include <cmath>

#include "doctest.h"
#include "lhylab/common.hpp"
#include "lhylab/quadrature.hpp"

using namespace lhy;

TEST_CASE("polynomial on a finite interval is exact") {
  const ValErr r = quad::integrate([](double x) { return x * x; }, 0.0, 1.0);
  CHECK(std::abs(r.value - 1.0 / 3.0) < 1e-13);
  CHECK(r.err < 1e-10);
}

TEST_CASE("exponential tail via the infinite-interval driver") {
  const ValErr r = quad::integrate_to_inf([](double x) { return std::exp(-x); }, 0.0);
  CHECK(std::abs(r.value - 1.0) < 1e-11);
}

TEST_CASE("squared-Lorentzian moment used by the Born integral") {
  // int_0^inf dx (1+x^2)^-4 = 5 pi / 32
  auto f = [](double x) {
    const double l = 1.0 + x * x;
    return 1.0 / (l * l * l * l);
  };
  const ValErr r = quad::integrate_to_inf(f, 0.0);
  CHECK(std::abs(r.value - 5.0 * PI / 32.0) < 1e-12);
}

TEST_CASE("breakpoint list agrees with a single panel") {
  auto f = [](double x) { return std::exp(-x) * std::cos(3.0 * x); };
  const ValErr whole = quad::integrate(f, 0.0, 10.0);
  const ValErr split =
      quad::integrate_pts(f, {0.0, 0.3, 1.0, 2.5, 10.0}, false, 1.0);
  CHECK(std::abs(whole.value - split.value) < 1e-11);
}

TEST_CASE("oscillatory sine transform of an exponential") {
  const double w = 3.0;
  const ValErr r =
      quad::sin_transform([](double x) { return std::exp(-x); }, 0.0, 60.0, w);
  CHECK(std::abs(r.value - w / (1.0 + w * w)) < 1e-10);
}

TEST_CASE("reported error bounds the true error") {
  auto f = [](double x) { return std::sqrt(x) * std::exp(-x); };
  const ValErr r = quad::integrate_to_inf(f, 0.0);
  const double exact = std::sqrt(PI) / 2.0;  // Gamma(3/2)
  CHECK(std::abs(r.value - exact) < 10.0 * r.err + 1e-12);
}
