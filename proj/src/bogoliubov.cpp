#include "lhylab/bogoliubov.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>
#include <stdexcept>

#include "lhylab/parallel.hpp"
#include "lhylab/potentials.hpp"
#include "lhylab/quadrature.hpp"

namespace lhy {

namespace {

inline double g_of(double k, double rho, const PotentialParams& p) {
  return rho * nu_hat(k, p);
}
inline double S_of(double k, double g) { return k * std::sqrt(k * k + 2.0 * g); }

// split points covering the phonon scale and the potential range
std::vector<double> k_splits(double rho, const PotentialParams& p) {
  const double kph = k_phonon(rho, p);
  const double kR = 1.0 / p.R0;
  std::set<double> s = {0.0,      kph * 1e-3, kph * 1e-2, kph * 0.1, kph,
                        10 * kph, 0.1 * kR,   kR,         10 * kR};
  return {s.begin(), s.end()};
}

// int d3q/(2pi)^3 f(|q|) = (1/2pi^2) int q^2 f dq
ValErr radial3(const std::function<double(double)>& f, double rho,
               const PotentialParams& p, double rel = 1e-11) {
  quad::Options opt;
  opt.abs_tol = 1e-300;
  opt.rel_tol = rel;
  auto g = [&](double q) { return q * q * f(q); };
  auto pts = k_splits(rho, p);
  ValErr v = quad::integrate_pts(g, pts, true, 10.0 / p.R0, opt);
  return {v.value / (2.0 * PI * PI), v.err / (2.0 * PI * PI)};
}

}  // namespace

double bog_sinh2(double k, double rho, const PotentialParams& p) {
  const double g = g_of(k, rho, p);
  const double S = S_of(k, g);
  const double D = g * g / (k * k + g + S);
  return D / (2.0 * S);
}

double bog_shch(double k, double rho, const PotentialParams& p) {
  const double g = g_of(k, rho, p);
  return g / (2.0 * S_of(k, g));
}

TrialFunction optimal_psi(double rho, const PotentialParams& p,
                          const std::vector<double>& grid) {
  if (grid.empty()) throw std::invalid_argument("optimal_psi: empty grid");
  TrialFunction tf;
  tf.rho = rho;
  tf.p = p;
  tf.k = grid;
  tf.psi.resize(grid.size());
  par::for_each_index(grid.size(), [&](size_t i) {
    const double k = grid[i];
    const double g = g_of(k, rho, p);
    tf.psi[i] = 0.5 * std::atanh(g / (k * k + g));
  });
  return tf;
}

namespace {

// I_j(k) = (4 a0 / pi) int q^2 f(q) / [(1+R0^2(k-q)^2)(1+R0^2(k+q)^2)] dq;
// product form of the angular average of nu(k-q), no cancellation.
double convolution(double k, double rho, const PotentialParams& p, bool sh2part) {
  auto f = [&](double q) {
    const double w = sh2part ? bog_sinh2(q, rho, p) : bog_shch(q, rho, p);
    const double dm = 1.0 + p.R0 * p.R0 * (k - q) * (k - q);
    const double dp = 1.0 + p.R0 * p.R0 * (k + q) * (k + q);
    return q * q * w / (dm * dp);
  };
  quad::Options opt;
  opt.abs_tol = 1e-300;
  opt.rel_tol = 1e-10;
  auto pts = k_splits(rho, p);
  // the factor 1/(1+R0^2 (k-q)^2) peaks at q = k
  pts.push_back(k);
  pts.push_back(k + 1.0 / p.R0);
  if (k > 1.0 / p.R0) pts.push_back(k - 1.0 / p.R0);
  std::sort(pts.begin(), pts.end());
  ValErr v = quad::integrate_pts(f, pts, true, 10.0 / p.R0, opt);
  return (4.0 * p.a0 / PI) * v.value;
}

}  // namespace

DepletionReport depletion_and_convolutions(const TrialFunction& tf, double rho,
                                           const PotentialParams& p) {
  DepletionReport rep;
  ValErr dep = radial3([&](double q) { return bog_sinh2(q, rho, p); }, rho, p);
  rep.rho0 = {rho - dep.value, dep.err};
  rep.k = tf.k;
  rep.I1.resize(tf.k.size());
  rep.I2.resize(tf.k.size());
  par::for_each_index(tf.k.size(), [&](size_t i) {
    rep.I1[i] = convolution(tf.k[i], rho, p, false);
    rep.I2[i] = convolution(tf.k[i], rho, p, true);
  });
  const double Y = rho * p.a0 * p.a0 * p.a0;
  const double s1 = rho * p.a0 * (p.a0 / p.R0);
  const double s2 = rho * p.a0 * std::sqrt(Y);
  for (size_t i = 0; i < tf.k.size(); ++i) {
    const double x = tf.k[i] * p.R0;
    const double lor = (1.0 + x * x) * (1.0 + x * x);
    rep.i1_bound_const = std::max(rep.i1_bound_const, std::abs(rep.I1[i]) * lor / s1);
    rep.i2_bound_const = std::max(rep.i2_bound_const, std::abs(rep.I2[i]) * lor / s2);
  }
  return rep;
}

UpperBoundReport variational_energy(const TrialFunction& tf, double rho,
                                    const PotentialParams& p) {
  UpperBoundReport rep;
  rep.mean_field = 0.5 * rho * nu_hat(0.0, p);

  ValErr dep = radial3([&](double q) { return bog_sinh2(q, rho, p); }, rho, p);
  const double rho0 = rho - dep.value;
  rep.rho0 = rho0;

  auto pos = [&](double k) {
    const double i2 = convolution(k, rho, p, true);
    return (k * k + rho0 * nu_hat(k, p) + 0.5 * i2) * bog_sinh2(k, rho, p);
  };
  auto neg = [&](double k) {
    const double i1 = convolution(k, rho, p, false);
    return (rho0 * nu_hat(k, p) - 0.5 * i1) * bog_shch(k, rho, p);
  };
  ValErr tp = radial3(pos, rho, p, 1e-10);
  ValErr tn = radial3(neg, rho, p, 1e-10);

  rep.energy_per_particle = {rep.mean_field + (tp.value - tn.value) / rho,
                             (tp.err + tn.err) / rho};
  rep.main_integral = bogoliubov_integral(rho, p);
  const double norm = 4.0 * PI * rho * p.a0;
  rep.normalized = {rep.energy_per_particle.value / norm,
                    rep.energy_per_particle.err / norm};
  rep.discrepancy = std::abs(rep.normalized.value - (1.0 - rep.main_integral.value));
  return rep;
}

ValErr phi4_of_eps(double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("phi4_of_eps: eps must be > 0");
  const double e2 = eps * eps;
  auto f = [&](double u) {
    const double u2 = u * u;
    const double l = 1.0 + u2;
    const double ghat = 1.0 / (l * l);         // g / eps^2
    const double g = e2 * ghat;                // g-tilde
    const double S = u * std::sqrt(u2 + 2.0 * g);
    return u2 * ghat * ghat / (u2 + g + S);    // u^2 D / eps^4
  };
  std::set<double> s = {0.0, eps * 1e-3, eps * 1e-2, eps * 0.1, eps,
                        10 * eps, 0.03, 0.3, 1.0, 3.0, 30.0};
  std::vector<double> pts;
  for (double x : s)
    if (x <= 30.0 * std::max(1.0, eps)) pts.push_back(x);
  pts.push_back(30.0 * std::max(1.0, eps));
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  quad::Options opt;
  opt.abs_tol = 1e-300;
  opt.rel_tol = 1e-12;
  return quad::integrate_pts(f, pts, true, std::max(1.0, eps), opt);
}

ValErr bogoliubov_integral(double rho, const PotentialParams& p) {
  const double eps = k_phonon(rho, p) * p.R0;
  ValErr phi4 = phi4_of_eps(eps);
  const double c = (4.0 / PI) * (p.a0 / p.R0);
  return {c * phi4.value, c * phi4.err};
}

LhyResult lhy_energy(double rho, double a) {
  LhyResult r;
  const double ya = rho * a * a * a;
  r.dilute = ya < 1e-2;
  r.value = 4.0 * PI * rho * a * (1.0 + lhy_slope() * std::sqrt(ya));
  return r;
}

FitResult sqrt_y_fit(const std::vector<std::pair<double, double>>& rows) {
  if (rows.size() < 2) throw std::invalid_argument("sqrt_y_fit: need >= 2 rows");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(rows.size());
  for (auto& [Y, v] : rows) {
    const double x = std::sqrt(Y);
    sx += x;
    sy += v;
    sxx += x * x;
    sxy += x * v;
  }
  FitResult fr;
  const double det = n * sxx - sx * sx;
  fr.c1 = (n * sxy - sx * sy) / det;
  fr.c0 = (sy - fr.c1 * sx) / n;
  double ss = 0;
  for (auto& [Y, v] : rows) {
    const double r = v - fr.c0 - fr.c1 * std::sqrt(Y);
    ss += r * r;
  }
  fr.fit_residual = std::sqrt(ss / n);
  return fr;
}

}  // namespace lhy
