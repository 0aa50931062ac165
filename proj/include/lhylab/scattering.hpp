#pragma once
// Scattering length of the exponential two-body potential, three ways.
//
// The zero-energy radial problem (reduced mass, kinetic symbol k^2) is
//   -2 u''(r) + (a0/R0^3) e^{-r/R0} u(r) = 0,  u(0) = 0,
// and a is defined by u(r) -> const * (r - a). The substitution
// z = z0 e^{-r/(2 R0)}, z0 = sqrt(2 a0/R0), turns it into the modified
// Bessel equation of order zero, giving the closed form
//   a = 2 R0 [ K0(z0)/I0(z0) + ln(z0/2) + euler_gamma ],
// whose small-z0 series is a = 2 R0 [w - (5/8) w^2 + (23/54) w^3 - ...],
// w = a0/(2 R0). The closed form is the ground-truth oracle; the shooting
// integrator must reproduce it, and the truncated series is the Born
// approximation a ~ a0 - (5/16) a0^2/R0 + (23/216) a0^3/R0^2.

#include <vector>

#include "lhylab/common.hpp"

namespace lhy {

enum class ScatteringMethod { shooting, closed_form_oracle, born };

struct ScatteringSolution {
  ValErr a;
  double z0 = 0.0;  // sqrt(2 a0/R0)
  ScatteringMethod method = ScatteringMethod::closed_form_oracle;
  long steps = 0;     // shooting only
  double rmax = 0.0;  // shooting only
};

ScatteringSolution scattering_length(const PotentialParams& p, ScatteringMethod m,
                                     double tol = 1e-11);

// Born series coefficients [a0, -(5/16) a0^2/R0, (23/216) a0^3/R0^2][:order+1].
// order must be 0, 1 or 2.
std::vector<double> born_coefficients(const PotentialParams& p, int order);

// int d^3k nu_hat(k)^2 / k^2, by radial quadrature. Closed form below. The
// second-order Born coefficient is -1/(128 pi^4) times this integral.
ValErr born_kernel_integral_quadrature(const PotentialParams& p);
double born_kernel_integral_closed_form(const PotentialParams& p);  // 40 pi^4 a0^2/R0

}  // namespace lhy
