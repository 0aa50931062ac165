#pragma once
// Interaction shape in momentum space and the sliding-localization profiles.
//
// nu_hat(k)  = 8 pi a0 / (1 + (k R0)^2)^2          (exponential e^{-r/R0} shape)
// v_hat_R(k) = 8 pi R^3 / (1 + (k R)^2)^2,  so nu_hat = (a0/R0^3) v_hat_{R0}.
//
// The per-axis localization bump chi1 is 1 on |s| <= (1-2t)/2, falls to 0 at
// |s| = (1-t)/2 through a C^infinity exp(-1/s) ramp, and the box profile is
// the product over axes. h1 is the normalized autocorrelation (chi1*chi1)/
// ||chi1||^2, so h1(0) = 1 exactly and supp h1 = [0, 1-t].

#include <vector>

#include "lhylab/common.hpp"

namespace lhy {

double nu_hat(double k, const PotentialParams& p);
double v_hat_R(double k, double R);

// C^infinity step: 0 for s <= 0, 1 for s >= 1.
double smoothstep(double s);
double smoothstep_deriv(double s);
double chi1(double s, double t);
double chi1_deriv(double s, double t);

class LocalizationProfile {
 public:
  double t = 0.0;
  double norm_chi2 = 0.0;  // int chi1^2
  double gamma = 0.0;      // (int chi1^2)^{-3}, the h-normalization
  double supp = 0.0;       // support radius of h1, = 1 - t
  double c2 = 0.0;         // int chi1'^2 / int chi1^2 = -h1''(0)

  double h1(double r) const;            // even; 0 beyond supp
  double one_minus_h1(double r) const;  // accurate for small r
  double h_axis(double r) const { return h1(r); }
  double h_diag(double r) const;
  double one_minus_h_diag(double r) const;

  // h at an arbitrary 3D offset (product over axes), in units of ell
  double h3(double z0, double z1, double z2) const;

 private:
  friend LocalizationProfile localization_profiles(double t);
  std::vector<double> lr_, lomh_;  // log r -> log(1 - h1) table
  double r_lo_ = 0.0, omh_lo_ = 0.0;
};

// Builds the profile for ramp parameter t in (0, 1/2).
LocalizationProfile localization_profiles(double t);

}  // namespace lhy
