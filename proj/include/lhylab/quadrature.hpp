#pragma once
// Adaptive Gauss-Kronrod quadrature (7-15 pair), semi-infinite maps, and a
// half-period-splitting sine transform. All routines are serial and
// deterministic: subdivision is depth-first bisection, sums are accumulated
// in a fixed order.

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "lhylab/common.hpp"

namespace lhy::quad {

// QUADPACK dqk15 nodes/weights on [-1, 1].
inline constexpr double XGK[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr double WGK[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double WG[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Options {
  double abs_tol = 1e-14;
  double rel_tol = 1e-11;
  int max_depth = 48;
};

template <class F>
inline std::pair<double, double> gk15_panel(F&& f, double a, double b) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  double fc = f(c);
  double kron = WGK[7] * fc, gauss = WG[3] * fc;
  for (int j = 0; j < 7; ++j) {
    double x = h * XGK[j];
    double v = f(c - x) + f(c + x);
    kron += WGK[j] * v;
    if (j % 2 == 1) gauss += WG[j / 2] * v;
  }
  return {kron * h, std::abs(kron - gauss) * std::abs(h)};
}

namespace detail {
template <class F>
inline void adapt(F& f, double a, double b, const Options& opt, int depth,
                  double tol_abs_panel, double& val, double& err) {
  auto [v, e] = gk15_panel(f, a, b);
  if (depth >= opt.max_depth || e <= tol_abs_panel + opt.rel_tol * std::abs(v) ||
      !(b - a > 1e-306 * std::max(1.0, std::abs(a)))) {
    val += v;
    err += e;
    return;
  }
  const double m = 0.5 * (a + b);
  adapt(f, a, m, opt, depth + 1, 0.5 * tol_abs_panel, val, err);
  adapt(f, m, b, opt, depth + 1, 0.5 * tol_abs_panel, val, err);
}
}  // namespace detail

template <class F>
inline ValErr integrate(F&& f, double a, double b, Options opt = {}) {
  if (a == b) return {0.0, 0.0};
  double val = 0.0, err = 0.0;
  detail::adapt(f, a, b, opt, 0, opt.abs_tol, val, err);
  return {val, err};
}

// int_a^inf f, mapped by x = a + L s/(1-s). L sets the scale that lands
// mid-interval; pick it near the integrand's decay length.
template <class F>
inline ValErr integrate_to_inf(F&& f, double a, double L = 1.0, Options opt = {}) {
  auto g = [&](double s) {
    const double om = 1.0 - s;
    const double x = a + L * s / om;
    return f(x) * L / (om * om);
  };
  double val = 0.0, err = 0.0;
  detail::adapt(g, 0.0, 1.0, opt, 0, opt.abs_tol, val, err);
  return {val, err};
}

// Integrate over [pts[0], pts.back()] split at the given interior points,
// then (optionally) the tail [pts.back(), inf) with decay scale tail_L.
template <class F>
inline ValErr integrate_pts(F&& f, const std::vector<double>& pts, bool to_inf,
                            double tail_L = 1.0, Options opt = {}) {
  ValErr out;
  for (size_t i = 0; i + 1 < pts.size(); ++i) {
    ValErr s = integrate(f, pts[i], pts[i + 1], opt);
    out.value += s.value;
    out.err += s.err;
  }
  if (to_inf) {
    ValErr s = integrate_to_inf(f, pts.back(), tail_L, opt);
    out.value += s.value;
    out.err += s.err;
  }
  return out;
}

// int_a^b f(r) sin(w r) dr, splitting at the zeros of sin(w r). Each
// half-period panel is integrated adaptively; panel sums are accumulated
// serially with compensation.
template <class F>
inline ValErr sin_transform(F&& f, double a, double b, double w, Options opt = {}) {
  if (!(w > 0.0)) throw std::invalid_argument("sin_transform: w must be > 0");
  auto g = [&](double r) { return f(r) * std::sin(w * r); };
  const double half = PI / w;
  if (b - a <= half) return integrate(g, a, b, opt);
  double val = 0.0, comp = 0.0, err = 0.0;
  long n0 = static_cast<long>(std::floor(a / half)) + 1;
  double x = a;
  for (long n = n0;; ++n) {
    double next = std::min(b, n * half);
    ValErr s = integrate(g, x, next, opt);
    double y = s.value - comp;
    double t = val + y;
    comp = (t - val) - y;
    val = t;
    err += s.err;
    x = next;
    if (x >= b) break;
  }
  return {val, err};
}

}  // namespace lhy::quad
