#pragma once
// Shared numeric types and the parameter conventions used across the library.
//
// Units: lengths in units of whatever a0 is given in; energies are per
// particle with the kinetic symbol k^2 (two-body problems use the reduced
// mass, hence the factor 2 in the scattering equation).

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace lhy {

inline constexpr double PI = 3.14159265358979323846264338327950288;
inline constexpr double EULER_GAMMA = 0.57721566490153286060651209008240243;

// Slope of the sqrt(Y) correction in the ground-state energy expansion,
// 128/(15 sqrt(pi)) = 4.8143...
inline double lhy_slope() { return 128.0 / (15.0 * std::sqrt(PI)); }

// A value with an absolute error estimate. Every quantity that comes out of
// a quadrature, a fit or an ODE solve carries one.
struct ValErr {
  double value = 0.0;
  double err = 0.0;
};

// Interaction shape parameters: nu(k) = 8 pi a0 / (1 + (k R0)^2)^2.
// a0 > 0 is the Born scattering length of the (attraction-free) potential,
// R0 > 0 its range.
struct PotentialParams {
  double a0 = 1.0;
  double R0 = 1.0;
};

// Dimensionless control parameters. Y = rho a0^3 is the gas parameter; the
// range is tied to it by R0 = a0 Y^(d - 1/2), so a0/R0 = Y^(1/2 - d).
struct GasPoint {
  double Y;
  double d;
};

// rho and potential for a gas point, with a0 fixed (default 1).
struct GasParams {
  double rho;
  PotentialParams p;
};

inline GasParams gas_params(double Y, double d, double a0 = 1.0) {
  if (!(Y > 0.0) || !(d > 0.0) || !(d < 0.5))
    throw std::invalid_argument("gas_params: need Y > 0, 0 < d < 1/2");
  GasParams g;
  g.p.a0 = a0;
  g.p.R0 = a0 * std::pow(Y, d - 0.5);
  g.rho = Y / (a0 * a0 * a0);
  return g;
}

// Phonon momentum scale sqrt(rho nu(0)) and its dimensionless form
// eps = k_ph R0 = sqrt(8 pi) Y^d.
inline double k_phonon(double rho, const PotentialParams& p) {
  return std::sqrt(8.0 * PI * rho * p.a0);
}
inline double eps_of(double Y, double d) {
  return std::sqrt(8.0 * PI) * std::pow(Y, d);
}

}  // namespace lhy
