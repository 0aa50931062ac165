#pragma once
// Bogoliubov-type variational upper bound.
//
// With the optimal quasi-free trial function,
//   sinh^2 psi = (k^2 + g - S)/(2S),  sinh psi cosh psi = g/(2S),
//   g = rho nu_hat(k), S = sqrt(k^4 + 2 g k^2),
// the energy per particle is
//   E = (1/2) rho nu(0)
//     + (1/rho) int d3k/(2pi)^3 [k^2 + rho0 nu + I2/2] sinh^2 psi
//     - (1/rho) int d3k/(2pi)^3 [rho0 nu - I1/2] sinh psi cosh psi,
// where rho0 is the condensate density and I1, I2 the convolutions of nu with
// sh*ch and sh^2. Dropping the depletion/convolution corrections collapses it
// to  E = (1/2) rho nu(0) - (1/2 rho) int d3k/(2pi)^3 D,
// D = k^2 + g - S, i.e. normalized  E/(4 pi rho a0) = 1 - J  with
//   J = 1/(8 pi rho^2 a0) * int d3k/(2pi)^3 D.
// J depends only on eps = k_ph R0 = sqrt(8 pi rho a0) R0 and a0/R0:
//   J = (4/pi) (a0/R0) Phi4(eps),   Phi4 -> 5 pi/64 + Psi5 * eps,
// with Psi5(0) = -8 sqrt(2)/15, which reproduces the expansion
//   J = (5/16)(a0/R0) - 128/(15 sqrt(pi)) sqrt(rho a0^3) + o(sqrt(Y)).

#include <string>
#include <vector>

#include "lhylab/common.hpp"

namespace lhy {

struct TrialFunction {
  std::vector<double> k;
  std::vector<double> psi;  // psi(k) = (1/2) atanh(g/(k^2+g)) on the grid
  double rho = 0.0;
  PotentialParams p;
};

struct DepletionReport {
  ValErr rho0;
  std::vector<double> k;   // report grid
  std::vector<double> I1;  // convolution of nu with sinh cosh
  std::vector<double> I2;  // convolution of nu with sinh^2
  // measured sup over the grid of |I_j| (1+(kR0)^2)^2 / scale_j, where
  // scale_1 = rho a0 * (a0/R0) and scale_2 = rho a0 * sqrt(rho a0^3)
  double i1_bound_const = 0.0;
  double i2_bound_const = 0.0;
};

struct UpperBoundReport {
  ValErr energy_per_particle;
  double mean_field = 0.0;  // (1/2) rho nu(0) = 4 pi rho a0
  ValErr main_integral;     // J
  ValErr normalized;        // energy/(4 pi rho a0)
  double discrepancy = 0.0; // |normalized - (1 - J)|
  double rho0 = 0.0;
};

// Pointwise Bogoliubov weights, cancellation-safe.
double bog_sinh2(double k, double rho, const PotentialParams& p);
double bog_shch(double k, double rho, const PotentialParams& p);

TrialFunction optimal_psi(double rho, const PotentialParams& p,
                          const std::vector<double>& grid);
DepletionReport depletion_and_convolutions(const TrialFunction& tf, double rho,
                                           const PotentialParams& p);
UpperBoundReport variational_energy(const TrialFunction& tf, double rho,
                                    const PotentialParams& p);

// J as defined above. Exact in (rho, p); no small-Y expansion inside.
ValErr bogoliubov_integral(double rho, const PotentialParams& p);

// Phi4(eps) = Phi(eps)/eps^4 and the subleading probe
// Psi5(eps) = (Phi4(eps) - 5 pi/64)/eps; Psi5(0+) = -8 sqrt(2)/15.
ValErr phi4_of_eps(double eps);

struct LhyResult {
  double value = 0.0;
  bool dilute = true;  // false flags rho a^3 >= 1e-2 (expansion unreliable)
};
LhyResult lhy_energy(double rho, double a);

struct FitResult {
  double c0 = 0.0;
  double c1 = 0.0;
  double fit_residual = 0.0;  // rms residual of the fit
};
// Least squares value ~ c0 + c1 sqrt(Y) over (Y, value) pairs.
FitResult sqrt_y_fit(const std::vector<std::pair<double, double>>& rows);

}  // namespace lhy
