#include "lhylab/scattering.hpp"

#include <cmath>
#include <stdexcept>

#include "lhylab/potentials.hpp"
#include "lhylab/quadrature.hpp"

namespace lhy {

namespace {

// One RK4 pass of u'' = (a0/(2 R0^3)) e^{-r/R0} u from 0 to rmax with n steps;
// returns a = rmax - u/u'.
double shoot_once(const PotentialParams& p, double rmax, long n) {
  const double c = p.a0 / (2.0 * p.R0 * p.R0 * p.R0);
  const double h = rmax / static_cast<double>(n);
  double u = 0.0, v = 1.0, r = 0.0;
  auto acc = [&](double rr, double uu) { return c * std::exp(-rr / p.R0) * uu; };
  for (long i = 0; i < n; ++i) {
    const double k1u = v, k1v = acc(r, u);
    const double k2u = v + 0.5 * h * k1v, k2v = acc(r + 0.5 * h, u + 0.5 * h * k1u);
    const double k3u = v + 0.5 * h * k2v, k3v = acc(r + 0.5 * h, u + 0.5 * h * k2u);
    const double k4u = v + h * k3v, k4v = acc(r + h, u + h * k3u);
    u += (h / 6.0) * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
    v += (h / 6.0) * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    r += h;
  }
  return rmax - u / v;
}

}  // namespace

ScatteringSolution scattering_length(const PotentialParams& p, ScatteringMethod m,
                                     double tol) {
  if (!(p.a0 > 0.0) || !(p.R0 > 0.0))
    throw std::invalid_argument("scattering_length: a0, R0 must be > 0");
  ScatteringSolution out;
  out.method = m;
  out.z0 = std::sqrt(2.0 * p.a0 / p.R0);
  switch (m) {
    case ScatteringMethod::closed_form_oracle: {
      const double i0 = std::cyl_bessel_i(0.0, out.z0);
      const double k0 = std::cyl_bessel_k(0.0, out.z0);
      const double a =
          2.0 * p.R0 * (k0 / i0 + std::log(out.z0 / 2.0) + EULER_GAMMA);
      out.a = {a, 16.0 * std::abs(a) * 1e-16 + 1e-18 * p.R0};
      return out;
    }
    case ScatteringMethod::born: {
      auto c = born_coefficients(p, 2);
      const double a = c[0] + c[1] + c[2];
      // next term is O((a0/R0)^4 R0); quote it as the error scale
      const double w = p.a0 / (2.0 * p.R0);
      out.a = {a, 2.0 * p.R0 * w * w * w * w};
      return out;
    }
    case ScatteringMethod::shooting: {
      const double rmax = 40.0 * p.R0;
      long n = 4096;
      double prev = shoot_once(p, rmax, n);
      double cur = prev, rich = 1.0;
      for (int it = 0; it < 9; ++it) {
        n *= 2;
        cur = shoot_once(p, rmax, n);
        rich = std::abs(cur - prev) / 15.0;
        prev = cur;
        if (rich <= 0.25 * std::max(tol * std::abs(cur), 1e-16 * p.R0)) break;
      }
      const double trunc = std::abs(shoot_once(p, 0.8 * rmax, n) - cur);
      out.a = {cur, rich + trunc};
      out.steps = n;
      out.rmax = rmax;
      return out;
    }
  }
  throw std::logic_error("scattering_length: unknown method");
}

std::vector<double> born_coefficients(const PotentialParams& p, int order) {
  if (order < 0 || order > 2)
    throw std::invalid_argument("born_coefficients: order must be 0, 1 or 2");
  std::vector<double> c = {p.a0};
  if (order >= 1) c.push_back(-(5.0 / 16.0) * p.a0 * p.a0 / p.R0);
  if (order >= 2) c.push_back((23.0 / 216.0) * p.a0 * p.a0 * p.a0 / (p.R0 * p.R0));
  return c;
}

ValErr born_kernel_integral_quadrature(const PotentialParams& p) {
  // int d^3k nu^2/k^2 = 4 pi int_0^inf nu(k)^2 dk
  auto f = [&](double k) {
    const double nv = nu_hat(k, p);
    return nv * nv;
  };
  quad::Options opt;
  opt.abs_tol = 1e-30;
  opt.rel_tol = 1e-13;
  std::vector<double> pts = {0.0, 0.5 / p.R0, 1.0 / p.R0, 4.0 / p.R0, 20.0 / p.R0};
  ValErr v = quad::integrate_pts(f, pts, true, 10.0 / p.R0, opt);
  return {4.0 * PI * v.value, 4.0 * PI * v.err};
}

double born_kernel_integral_closed_form(const PotentialParams& p) {
  // 4 pi (8 pi a0)^2 / R0 * int dx/(1+x^2)^4 = 4 pi * 64 pi^2 a0^2/R0 * 5 pi/32
  return 40.0 * PI * PI * PI * PI * p.a0 * p.a0 / p.R0;
}

}  // namespace lhy
