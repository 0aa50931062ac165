#include "lhylab/lower_bound.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <set>
#include <stdexcept>

#include "lhylab/parallel.hpp"
#include "lhylab/quadrature.hpp"

namespace lhy {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct OneMinusH {
  const LocalizationProfile* lp;
  bool diag;
  double operator()(double r) const {
    return diag ? lp->one_minus_h_diag(r) : lp->one_minus_h1(r);
  }
  // diagonal support is sqrt(3) supp; 1-h_diag ~ 3 (c2/2)(r/sqrt3)^2, i.e. the
  // same quadratic coefficient c2 as the axis direction
  double supp() const { return diag ? lp->supp * std::sqrt(3.0) : lp->supp; }
};

// correction transform T(p) = int_0^inf r^2 e^{-lam r} (1-h(r)) sinc(pr) dr,
// with 1-h == 1 beyond supp handled in closed form.
double corr_T(double p, double lam, const OneMinusH& omh, double* err) {
  const double s = omh.supp();
  const double rcut = std::min(s, 60.0 / lam);
  quad::Options opt;
  opt.abs_tol = 1e-300;
  opt.rel_tol = 1e-11;
  double val = 0.0, e = 0.0;
  if (p <= 0.0) {
    auto f = [&](double r) { return r * r * std::exp(-lam * r) * omh(r); };
    ValErr A = quad::integrate(f, 0.0, rcut, opt);
    val = A.value;
    e = A.err;
    if (rcut >= s) {  // exact tail of r^2 e^{-lam r} from supp
      val += std::exp(-lam * s) * (s * s / lam + 2.0 * s / (lam * lam) +
                                   2.0 / (lam * lam * lam));
    }
  } else {
    auto f = [&](double r) { return r * std::exp(-lam * r) * omh(r); };
    ValErr A = quad::sin_transform(f, 0.0, rcut, p, opt);
    val = A.value / p;
    e = A.err / p;
    if (rcut >= s) {
      const std::complex<double> q(lam, -p);
      const std::complex<double> tail =
          std::exp(-q * s) * (s / q + 1.0 / (q * q));
      val += tail.imag() / p;
    }
  }
  if (err) *err = e;
  return val;
}

double exact_h1_part(double p, double nu, double lam) {
  // (1/a^2 - 1/b^2) written as a product: a and b agree to machine precision
  // once p^2 >> lam^2 - nu^2, and the direct difference is noise there
  const double a = nu * nu + p * p, b = lam * lam + p * p;
  const double bma = (lam - nu) * (lam + nu);  // b - a, exact
  return 8.0 * PI * nu * bma * (a + b) / ((a * a) * (b * b));
}

double F_eval(double p, double nu, double omega, const OneMinusH& omh,
              double* err = nullptr) {
  const double lam = nu + omega;
  double e = 0.0;
  const double T = corr_T(p, lam, omh, &e);
  if (err) *err = (nu / lam) * 4.0 * PI * e;
  return exact_h1_part(p, nu, lam) + (nu / lam) * 4.0 * PI * T;
}

double F_asym(double p, double nu, double omega, double c2) {
  const double lam = nu + omega;
  const double b = lam * lam + p * p;
  return exact_h1_part(p, nu, lam) +
         48.0 * PI * nu * c2 * (lam * lam - p * p) / (b * b * b * b);
}

// numeric scan limit: covers the lam scale, the ramp-derivative scale and the
// nu scale; beyond this the p^-6 asymptotics is accurate
double p_numeric_limit(double nu, double omega, double t) {
  const double lam = nu + omega;
  return std::max({30.0 * lam, 60.0 / t, 50.0 * nu, 30.0});
}

struct ScanResult {
  double minF, argmin, F0;
};

ScanResult scan_min(double nu, double omega, const OneMinusH& omh, double t,
                    double c2, std::vector<double>* ps_out = nullptr,
                    std::vector<double>* Fs_out = nullptr) {
  const double lam = nu + omega;
  const double pnum = p_numeric_limit(nu, omega, t);
  std::vector<double> ps;
  ps.push_back(0.0);
  for (int i = 1; i <= 120; ++i) ps.push_back(3.0 * lam * i / 120.0);
  for (int i = 1; i <= 80; ++i)
    ps.push_back(3.0 * lam * std::pow(pnum / (3.0 * lam), i / 80.0));
  std::vector<double> Fs(ps.size());
  par::for_each_index(ps.size(), [&](size_t i) {
    Fs[i] = F_eval(ps[i], nu, omega, omh);
  });
  ScanResult r;
  r.F0 = Fs[0];
  r.minF = kInf;
  r.argmin = 0.0;
  for (size_t i = 0; i < ps.size(); ++i)
    if (Fs[i] < r.minF) {
      r.minF = Fs[i];
      r.argmin = ps[i];
    }
  // asymptotic continuation out to |F| < 1e-12 F(0)
  const double pend =
      std::max(2.0 * pnum, std::pow(8.0 * PI * nu / (1e-12 * std::max(r.F0, 1e-300)), 0.25));
  for (int i = 1; i <= 50; ++i) {
    const double p = pnum * std::pow(pend / pnum, i / 50.0);
    const double F = F_asym(p, nu, omega, c2);
    ps.push_back(p);
    Fs.push_back(F);
    if (F < r.minF) {
      r.minF = F;
      r.argmin = p;
    }
  }
  if (ps_out) *ps_out = std::move(ps);
  if (Fs_out) *Fs_out = std::move(Fs);
  return r;
}

}  // namespace

KernelTransform sliding_kernel_transform(const SlidingKernelParams& sk,
                                         const std::vector<double>& pgrid) {
  if (!sk.lp) throw std::invalid_argument("sliding_kernel_transform: profile required");
  if (!(sk.nu > 0.0) || !(sk.omega >= 0.0))
    throw std::invalid_argument("sliding_kernel_transform: need nu > 0, omega >= 0 (decaying kernel)");
  const LocalizationProfile& lp = *sk.lp;
  KernelTransform out;
  const double lam = sk.nu + sk.omega;
  const OneMinusH axis{&lp, false}, diag{&lp, true};

  if (pgrid.empty()) {
    ScanResult r = scan_min(sk.nu, sk.omega, axis, lp.t, lp.c2, &out.p, &out.F);
    out.min_F = r.minF;
    out.min_F_p = r.argmin;
    out.F0 = r.F0;
    ScanResult rd = scan_min(sk.nu, sk.omega, diag, lp.t, lp.c2);
    out.min_F_diag = rd.minF;
  } else {
    out.p = pgrid;
    out.F.resize(pgrid.size());
    par::for_each_index(pgrid.size(), [&](size_t i) {
      out.F[i] = F_eval(pgrid[i], sk.nu, sk.omega, axis);
    });
    out.min_F = kInf;
    for (size_t i = 0; i < out.p.size(); ++i)
      if (out.F[i] < out.min_F) {
        out.min_F = out.F[i];
        out.min_F_p = out.p[i];
      }
    out.F0 = F_eval(0.0, sk.nu, sk.omega, axis);
    double mind = kInf;
    for (double p : pgrid) mind = std::min(mind, F_eval(p, sk.nu, sk.omega, diag));
    out.min_F_diag = mind;
  }
  out.tail_coeff = 16.0 * PI * sk.nu * (lam * lam - sk.nu * sk.nu - 3.0 * lp.c2);

  // kernel samples
  const int nz = 61;
  out.z.resize(nz);
  out.K.resize(nz);
  for (int i = 0; i < nz; ++i) {
    const double z = 3.0 * i / (nz - 1);
    out.z[i] = z;
    out.K[i] = std::exp(-sk.nu * z) *
               (1.0 - std::exp(-sk.omega * z) * lp.h_axis(z) / (1.0 + sk.omega / sk.nu));
  }
  return out;
}

namespace {

bool positive_kernel(double nu, double omega, const OneMinusH& omh, double t, double c2) {
  if (nu + omega <= 0.0) return false;
  const double lam = nu + omega;
  if (lam * lam - nu * nu - 3.0 * c2 < 0.0) return false;  // p^-6 tail sign
  ScanResult r = scan_min(nu, omega, omh, t, c2);
  return r.minF > 0.0;
}

}  // namespace

C1Estimate estimate_c1(double t, const std::vector<double>& omega_grid,
                       const std::vector<double>& nu_grid) {
  if (omega_grid.empty() || nu_grid.size() < 2)
    throw std::invalid_argument("estimate_c1: need omega grid and nu bracket");
  LocalizationProfile lp = localization_profiles(t);
  const OneMinusH axis{&lp, false};
  C1Estimate est;
  est.t = t;
  est.omegas = omega_grid;
  est.finite = true;
  const double nlo0 = nu_grid.front(), nhi0 = nu_grid.back();
  for (double om : omega_grid) {
    double lo = nlo0, hi = nhi0;
    double thr;
    if (positive_kernel(lo, om, axis, t, lp.c2)) {
      thr = lo;
    } else if (!positive_kernel(hi, om, axis, t, lp.c2)) {
      thr = kInf;
      est.finite = false;
    } else {
      for (int it = 0; it < 40 && hi / lo > 1.004; ++it) {
        const double mid = std::sqrt(lo * hi);
        if (positive_kernel(mid, om, axis, t, lp.c2))
          hi = mid;
        else
          lo = mid;
      }
      thr = hi;
    }
    est.thresholds.push_back(thr);
    if (thr < kInf) est.C1 = std::max(est.C1, std::min(1.0, om) * thr * t);
  }
  return est;
}

// estimate_c1 at t = 0.1 over omega in [0.05, 20], nu up to 1e6 measures
// sup min(1, omega) nu*(omega) t = 11.7273; frozen just above that
double c1_default() { return 12.0; }

double averaging_identity_residual(const std::array<double, 3>& x,
                                   const std::array<double, 3>& y,
                                   const LocalizationProfile& lp, double R,
                                   double R0, double ell) {
  const double t = lp.t;
  const double hi = (1.0 - t) / 2.0, lo = (1.0 - 2.0 * t) / 2.0;
  quad::Options opt;
  opt.abs_tol = 1e-16;
  opt.rel_tol = 1e-12;
  double lhs = lp.gamma, rhs = 1.0;
  double sep2 = 0.0;
  for (int j = 0; j < 3; ++j) {
    const double w = (x[j] - y[j]) / ell;
    sep2 += w * w * ell * ell;
    auto f = [&](double u) { return chi1(u, t) * chi1(u - w, t); };
    std::vector<double> pts = {-hi, -lo, lo, hi, w - hi, w - lo, w + lo, w + hi};
    std::sort(pts.begin(), pts.end());
    pts.erase(std::remove_if(pts.begin(), pts.end(),
                             [&](double u) { return u < -hi || u > hi; }),
              pts.end());
    pts.insert(pts.begin(), -hi);
    pts.push_back(hi);
    lhs *= quad::integrate_pts(f, pts, false, 1.0, opt).value;
    rhs *= lp.h1(w);
  }
  const double vfac = std::exp(-std::sqrt(sep2) / R) * (R / R0);
  lhs *= vfac;
  rhs *= vfac;
  if (std::abs(rhs) < 1e-300 && std::abs(lhs) < 1e-300) return 0.0;
  return std::abs(lhs - rhs) / std::max(std::abs(rhs), 1e-300);
}

namespace {

struct LBSetup {
  double gamma, R, omega_t, m2;  // m2 = (ell t^3)^{-2}
  double gcoef;                  // gamma a0 R rho / R0^4
  double kin_coef;               // (1-C't)^2 rho ell^3/n
};

LBSetup lb_setup(double rho, const PotentialParams& p, double ell, double t,
                 double n, double Cprime, double c_omega, const LocalizationProfile& lp) {
  LBSetup s;
  const double cw = c_omega < 0.0 ? c1_default() : c_omega;
  s.omega_t = cw * (p.R0 / ell) / t;
  s.R = 1.0 / (1.0 / p.R0 + s.omega_t / ell);
  s.gamma = lp.gamma;
  const double m = 1.0 / (ell * t * t * t);
  s.m2 = m * m;
  s.gcoef = s.gamma * p.a0 * s.R * rho / (p.R0 * p.R0 * p.R0 * p.R0);
  s.kin_coef = (1.0 - Cprime * t) * (1.0 - Cprime * t) * rho * ell * ell * ell / n;
  return s;
}

}  // namespace

LowerBoundKernels lower_bound_integral(double rho, const PotentialParams& p,
                                       double ell, double t, double n,
                                       double Cprime, double c_omega) {
  if (!(n >= 1.0)) throw std::invalid_argument("lower_bound_integral: need n >= 1");
  LocalizationProfile lp = localization_profiles(t);
  LBSetup s = lb_setup(rho, p, ell, t, n, Cprime, c_omega, lp);
  LowerBoundKernels out;
  out.gamma = s.gamma;
  out.R = s.R;
  out.omega_t = s.omega_t;
  out.ell_t3_inv2 = s.m2;

  auto gfun = [&](double k) { return s.gcoef * v_hat_R(k, s.R); };
  auto kin = [&](double k) {
    const double k2 = k * k;
    return s.kin_coef * k2 * k2 / (k2 + s.m2);
  };
  auto integrand = [&](double k) {
    const double g = gfun(k), fk = kin(k);
    const double f = fk + g;
    // f - sqrt(f^2-g^2) = g^2/(f + sqrt(kin (kin+2g)))
    return g * g / (f + std::sqrt(fk * (fk + 2.0 * g)));
  };

  const double kph = k_phonon(rho, p);
  const double m = std::sqrt(s.m2);
  std::set<double> sp = {0.0,     0.1 * m,       m,   10.0 * m, 0.1 * kph, kph,
                         10 * kph, 0.1 / s.R, 1 / s.R, 10 / s.R, 0.1 / p.R0, 1 / p.R0,
                         10 / p.R0};
  std::vector<double> pts(sp.begin(), sp.end());
  quad::Options opt;
  opt.abs_tol = 1e-300;
  opt.rel_tol = 1e-11;
  auto rad = [&](auto&& f) {
    auto g2 = [&](double k) { return k * k * f(k); };
    ValErr v = quad::integrate_pts(g2, pts, true, 10.0 / std::min(s.R, p.R0), opt);
    return ValErr{v.value / (2.0 * PI * PI), v.err / (2.0 * PI * PI)};
  };

  ValErr main = rad(integrand);
  out.I = {main.value / (2.0 * rho), main.err / (2.0 * rho)};

  // f > g and the pointwise elementary bounds, on a log grid
  out.min_f_minus_g = kInf;
  const double klo = 1e-3 * m, khi = 1e3 / p.R0;
  for (int i = 0; i <= 240; ++i) {
    const double k = klo * std::pow(khi / klo, i / 240.0);
    const double g = gfun(k), fk = kin(k);
    if (fk <= 0.0 && k > 0.0) {
      out.fg_ok = false;
      out.k_violation = k;
    }
    out.min_f_minus_g = std::min(out.min_f_minus_g, fk);
    const double D = g * g / (fk + g + std::sqrt(fk * (fk + 2.0 * g)));
    const double cap = std::min(g, fk > 0 ? g * g / fk : kInf);
    out.pointwise_worst =
        std::max({out.pointwise_worst, D < 0 ? -D : 0.0, (D - cap) / std::max(cap, 1e-300)});
  }

  // split-bound chain at k*^2 = a0 rho
  const double kstar = std::sqrt(p.a0 * rho);
  {
    auto g2 = [&](double k) { return k * k * gfun(k); };
    std::vector<double> lowpts;
    for (double q : pts)
      if (q < kstar) lowpts.push_back(q);
    lowpts.push_back(kstar);
    ValErr low = quad::integrate_pts(g2, lowpts, false, 1.0, opt);
    auto hifun = [&](double k) {
      const double g = gfun(k), fk = kin(k);
      return k * k * g * g / fk;
    };
    std::vector<double> hipts = {kstar};
    for (double q : pts)
      if (q > kstar) hipts.push_back(q);
    ValErr high = quad::integrate_pts(hifun, hipts, true, 10.0 / std::min(s.R, p.R0), opt);
    out.low_part = {low.value / (2.0 * PI * PI * 2.0 * rho),
                    low.err / (2.0 * PI * PI * 2.0 * rho)};
    out.high_part = {high.value / (2.0 * PI * PI * 2.0 * rho),
                     high.err / (2.0 * PI * PI * 2.0 * rho)};
  }
  out.chain_bound = out.low_part.value + out.high_part.value;

  out.crude_bound = s.gamma * p.a0 * s.R / (2.0 * p.R0 * p.R0 * p.R0 * p.R0);
  ValErr crude = rad(gfun);
  out.crude_quadrature = {crude.value / (2.0 * rho), crude.err / (2.0 * rho)};
  return out;
}

AprioriReport apriori_thresholds(double rho, const PotentialParams& p, double ell,
                                 double t, double n, double c_omega) {
  LocalizationProfile lp = localization_profiles(t);
  LBSetup s = lb_setup(rho, p, ell, t, n, 1.0, c_omega, lp);
  AprioriReport r;
  r.gamma = s.gamma;
  r.R = s.R;
  const double R4 = std::pow(s.R, 4.0), R04 = std::pow(p.R0, 4.0);
  r.certificate =
      2.0 * PI * s.gamma * (p.a0 * R4 / R04) * (rho * rho * ell * ell * ell - 4.0 * n * rho);
  r.n_threshold = rho * ell * ell * ell / 4.0;
  r.nonneg = r.certificate >= 0.0;
  r.depletion_scale = p.a0 * ell * ell / (p.R0 * p.R0 * p.R0);
  r.regime_ok = r.depletion_scale < 1.0;
  return r;
}

}  // namespace lhy
