#include "lhylab/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "lhylab/quadrature.hpp"

namespace lhy {

double nu_hat(double k, const PotentialParams& p) {
  const double x = k * p.R0;
  const double d = 1.0 + x * x;
  return 8.0 * PI * p.a0 / (d * d);
}

double v_hat_R(double k, double R) {
  const double x = k * R;
  const double d = 1.0 + x * x;
  return 8.0 * PI * R * R * R / (d * d);
}

double smoothstep(double s) {
  if (s <= 0.0) return 0.0;
  if (s >= 1.0) return 1.0;
  const double f = std::exp(-1.0 / s);
  const double g = std::exp(-1.0 / (1.0 - s));
  return f / (f + g);
}

double smoothstep_deriv(double s) {
  if (s <= 0.0 || s >= 1.0) return 0.0;
  const double f = std::exp(-1.0 / s);
  const double g = std::exp(-1.0 / (1.0 - s));
  const double q = f + g;
  return (f * g / (q * q)) * (1.0 / (s * s) + 1.0 / ((1.0 - s) * (1.0 - s)));
}

double chi1(double s, double t) {
  const double a = std::abs(s);
  return smoothstep(((1.0 - t) / 2.0 - a) / (t / 2.0));
}

double chi1_deriv(double s, double t) {
  const double a = std::abs(s);
  double d = -smoothstep_deriv(((1.0 - t) / 2.0 - a) / (t / 2.0)) * (2.0 / t);
  return s < 0.0 ? -d : d;
}

namespace {

// int chi1(u) * (chi1(u) - chi1(u - r)) du / norm, i.e. 1 - h1(r), by direct
// quadrature with splits at every ramp edge of either factor.
double omh_quad(double r, double t, double norm) {
  const double hi = (1.0 - t) / 2.0, lo = (1.0 - 2.0 * t) / 2.0;
  std::vector<double> pts = {-hi, -lo, lo, hi, -hi + r, -lo + r, lo + r, hi + r};
  std::sort(pts.begin(), pts.end());
  pts.erase(std::remove_if(pts.begin(), pts.end(),
                           [&](double x) { return x < -hi || x > hi; }),
            pts.end());
  if (pts.empty() || pts.front() > -hi) pts.insert(pts.begin(), -hi);
  if (pts.back() < hi) pts.push_back(hi);
  auto f = [&](double u) { return chi1(u, t) * (chi1(u, t) - chi1(u - r, t)); };
  quad::Options opt;
  opt.abs_tol = 1e-17;
  opt.rel_tol = 1e-13;
  ValErr v = quad::integrate_pts(f, pts, false, 1.0, opt);
  return v.value / norm;
}

}  // namespace

double LocalizationProfile::one_minus_h1(double r) const {
  r = std::abs(r);
  if (r >= supp) return 1.0;
  if (r < r_lo_) {
    const double q = r / r_lo_;
    return omh_lo_ * q * q;  // quadratic regime, 1 - h1 ~ c2 r^2 / 2
  }
  const double lr = std::log(r);
  // cubic Hermite in (log r, log(1-h1)) with centered-difference slopes
  const size_t n = lr_.size();
  size_t i = static_cast<size_t>((lr - lr_.front()) / (lr_[1] - lr_[0]));
  if (i >= n - 1) i = n - 2;
  const double x0 = lr_[i], x1 = lr_[i + 1], hgap = x1 - x0;
  const double y0 = lomh_[i], y1 = lomh_[i + 1];
  const double m0 = (i == 0) ? (lomh_[1] - lomh_[0]) / hgap
                             : (lomh_[i + 1] - lomh_[i - 1]) / (2.0 * hgap);
  const double m1 = (i + 2 >= n) ? (lomh_[n - 1] - lomh_[n - 2]) / hgap
                                 : (lomh_[i + 2] - lomh_[i]) / (2.0 * hgap);
  const double s = (lr - x0) / hgap;
  const double s2 = s * s, s3 = s2 * s;
  const double v = (2 * s3 - 3 * s2 + 1) * y0 + (s3 - 2 * s2 + s) * hgap * m0 +
                   (-2 * s3 + 3 * s2) * y1 + (s3 - s2) * hgap * m1;
  return std::min(1.0, std::exp(v));
}

double LocalizationProfile::h1(double r) const {
  r = std::abs(r);
  if (r >= supp) return 0.0;
  return 1.0 - one_minus_h1(r);
}

double LocalizationProfile::h_diag(double r) const {
  const double h = h1(r / std::sqrt(3.0));
  return h * h * h;
}

double LocalizationProfile::one_minus_h_diag(double r) const {
  const double e = one_minus_h1(r / std::sqrt(3.0));
  return e * (3.0 - 3.0 * e + e * e);
}

double LocalizationProfile::h3(double z0, double z1, double z2) const {
  return h1(z0) * h1(z1) * h1(z2);
}

LocalizationProfile localization_profiles(double t) {
  if (!(t > 0.0) || !(t < 0.5))
    throw std::invalid_argument("localization_profiles: need 0 < t < 1/2");
  LocalizationProfile lp;
  lp.t = t;
  lp.supp = 1.0 - t;

  const double hi = (1.0 - t) / 2.0, lo = (1.0 - 2.0 * t) / 2.0;
  quad::Options opt;
  opt.abs_tol = 1e-16;
  opt.rel_tol = 1e-13;
  auto c2f = [&](double u) { return chi1(u, t) * chi1(u, t); };
  lp.norm_chi2 = quad::integrate_pts(c2f, {-hi, -lo, lo, hi}, false, 1.0, opt).value;
  lp.gamma = 1.0 / (lp.norm_chi2 * lp.norm_chi2 * lp.norm_chi2);
  auto d2f = [&](double u) {
    const double d = chi1_deriv(u, t);
    return d * d;
  };
  lp.c2 = quad::integrate_pts(d2f, {-hi, -lo, lo, hi}, false, 1.0, opt).value /
          lp.norm_chi2;

  // 1 - h1 table on log-spaced r; below r_lo the quadratic regime is exact to
  // O((r/ramp)^2) relative.
  lp.r_lo_ = 1e-5;
  const int N = 1600;
  lp.lr_.resize(N);
  lp.lomh_.resize(N);
  const double lr0 = std::log(lp.r_lo_);
  // stop the table just shy of supp where 1-h1 == 1 exactly
  const double lr1 = std::log(lp.supp * (1.0 - 1e-12));
  for (int i = 0; i < N; ++i) {
    const double lr = lr0 + (lr1 - lr0) * i / (N - 1);
    lp.lr_[i] = lr;
    const double v = omh_quad(std::exp(lr), t, lp.norm_chi2);
    lp.lomh_[i] = std::log(std::max(v, 1e-300));
  }
  lp.omh_lo_ = std::exp(lp.lomh_.front());
  return lp;
}

}  // namespace lhy
