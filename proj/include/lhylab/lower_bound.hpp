#pragma once
// Lower-bound side: sliding-kernel positivity, the averaging identity, the
// dropped-terms integral I, and the a-priori threshold arithmetic.
//
/// Kernel (lengths in units of ell):  K(z) = e^{-nu |z|} [1 - e^{-omega |z|}
// h(z)/(1 + omega/nu)].  Its 3D radial transform splits exactly as
//   F(p) = 8 pi nu [ 1/(nu^2+p^2)^2 - 1/(lam^2+p^2)^2 ]        (h == 1 part)
//        + (nu/lam) 4 pi int r^2 e^{-lam r} (1 - h(r)) sinc(pr) dr,
// lam = nu + omega. The first bracket is positive; the correction carries all
// h-dependence through 1 - h, which vanishes quadratically at r = 0, so the
// two pieces never cancel catastrophically. Large p obeys
//   F(p) ~ 16 pi nu (lam^2 - nu^2 - 3 c2)/p^6,  c2 = int chi'^2/int chi^2,
// which is also the binding positivity constraint for omega <~ 1.

#include <array>
#include <vector>

#include "lhylab/common.hpp"
#include "lhylab/potentials.hpp"

namespace lhy {

struct SlidingKernelParams {
  double nu = 0.0;     // decay rate ell/R
  double omega = 0.0;  // subtraction rate
  const LocalizationProfile* lp = nullptr;
};

struct KernelTransform {
  std::vector<double> z, K;  // kernel samples
  std::vector<double> p, F;  // transform samples (axis-direction h)
  double F0 = 0.0;
  double min_F = 0.0;
  double min_F_p = 0.0;
  double tail_coeff = 0.0;   // 16 pi nu (lam^2 - nu^2 - 3 c2)
  double min_F_diag = 0.0;   // same scan with the diagonal-direction profile
};

// pgrid optional; default covers [0, 30 lam] numerically and continues with
// the p^-6 asymptotic form out to where |F| < 1e-12 F(0).
KernelTransform sliding_kernel_transform(const SlidingKernelParams& sk,
                                         const std::vector<double>& pgrid = {});

struct C1Estimate {
  double C1 = 0.0;
  bool finite = false;
  double t = 0.0;
  std::vector<double> omegas;
  std::vector<double> thresholds;  // nu*(omega); inf when outside the bracket
};

// Bisects nu in [nu_grid.front(), nu_grid.back()] at each omega for the
// positivity threshold; C1 = max over omega of min{1,omega} nu* t.
C1Estimate estimate_c1(double t, const std::vector<double>& omega_grid,
                       const std::vector<double>& nu_grid);

// Default constant used for omega(t) = c_omega t^{-1} R0/ell when no measured
// value is supplied (frozen from estimate_c1 at t = 0.1, default grids).
double c1_default();

// Relative residual between the quadrature evaluation of the z-average
//   gamma (R/R0) int dz/ell^3 chi((x+z)/ell) v_R(x-y) chi((y+z)/ell)
// and the closed form (R/R0) h((x-y)/ell) v_R(x-y). Points in units of ell.
double averaging_identity_residual(const std::array<double, 3>& x,
                                   const std::array<double, 3>& y,
                                   const LocalizationProfile& lp, double R,
                                   double R0, double ell = 1.0);

struct LowerBoundKernels {
  ValErr I;                  // (1/2rho) int d3k/(2pi)^3 [f - sqrt(f^2-g^2)]
  bool fg_ok = true;         // f > g held on the check grid
  double k_violation = -1.0; // offending k when fg_ok is false
  double min_f_minus_g = 0.0;
  // split-bound diagnostics at k*^2 = a0 rho: integrand <= g below, <= g^2/(f-g) above
  ValErr low_part, high_part;
  double chain_bound = 0.0;       // (1/2rho) (low + high)
  double crude_bound = 0.0;       // (1/2rho) int g  (= gamma a0 R/(2 R0^4))
  ValErr crude_quadrature;        // same by direct quadrature
  double pointwise_worst = 0.0;   // max violation of 0 <= D <= min{g, g^2/(f-g)}
  // derived parameters echoed back
  double gamma = 0.0, R = 0.0, omega_t = 0.0, ell_t3_inv2 = 0.0;
};

// f(k) = (1-C't)^2 (rho ell^3/n) k^4/(k^2 + (ell t^3)^{-2}) + g(k),
// g(k) = gamma (a0 R rho/R0^4) v_hat_R(k); R from 1/R = 1/R0 + omega/ell with
// omega = c_omega t^{-1} R0/ell (c_omega < 0 means use c1_default()).
LowerBoundKernels lower_bound_integral(double rho, const PotentialParams& p,
                                       double ell, double t, double n,
                                       double Cprime, double c_omega = -1.0);

struct AprioriReport {
  double certificate = 0.0;      // 2 pi gamma (a0 R^4/R0^4)(rho^2 ell^3 - 4 n rho)
  double n_threshold = 0.0;      // rho ell^3 / 4
  bool nonneg = false;           // certificate >= 0
  double depletion_scale = 0.0;  // a0 ell^2 / R0^3
  bool regime_ok = false;        // depletion_scale < 1
  double gamma = 0.0, R = 0.0;
};

AprioriReport apriori_thresholds(double rho, const PotentialParams& p, double ell,
                                 double t, double n, double c_omega = -1.0);

}  // namespace lhy
