// Acceptance harness: one line per criterion, [PASS]/[FAIL] with the measured
// numbers inline. Exit code is the number of failed criteria. The last
// criterion drives the command-line binary (path given as argv[1]) to compare
// repeated runs byte for byte.

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "lhylab/bogoliubov.hpp"
#include "lhylab/common.hpp"
#include "lhylab/exponents.hpp"
#include "lhylab/fock.hpp"
#include "lhylab/lower_bound.hpp"
#include "lhylab/parallel.hpp"
#include "lhylab/potentials.hpp"
#include "lhylab/scattering.hpp"

using namespace lhy;

namespace {

int g_failures = 0;

void report(int idx, bool pass, const std::string& msg) {
  std::printf("[%s] %2d. %s\n", pass ? "PASS" : "FAIL", idx, msg.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

double now_s() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

// ------------------------------------------------- 1: exponent optimum

void criterion_1() {
  const double t0 = now_s();
  const MaxDResult r = max_feasible_d(Rat(1, 100));
  const MaxDResult boundary = max_feasible_d(Rat(1, 69));
  const double dt = now_s() - t0;
  const bool exact = (r.d0 == Rat(1, 69)) && (r.d0.str() == "1/69");
  const bool witness = r.witness_ok && check_exponents(r.witness).all_ok;
  const bool infeasible = !boundary.witness_ok;
  const bool fast = dt < 1.0;
  report(1, exact && witness && infeasible && r.lp_cross_check && fast,
         "exponent optimum: d0 = " + r.d0.str() + ", witness at 1/100 " +
             (witness ? "verified" : "FAILED") + ", boundary 1/69 " +
             (infeasible ? "infeasible" : "NOT refused") + ", " +
             fmt(dt * 1e3) + " ms");
}

// ------------------------------------------------- 2: second-order term

void criterion_2() {
  const double t0 = now_s();
  bool ok = true;
  double worst = 0.0;
  for (auto [a0, R0] : {std::pair{0.1, 1.0}, {0.3, 0.5}, {2.0, 3.0}}) {
    PotentialParams p{a0, R0};
    const ValErr q = born_kernel_integral_quadrature(p);
    const double v = -q.value / (128.0 * PI * PI * PI);
    const double target = -(5.0 * PI / 16.0) * a0 * a0 / R0;
    const double rel = std::abs(v - target) / std::abs(target);
    worst = std::max(worst, rel);
    ok = ok && rel <= 1e-9;
  }
  const double dt = now_s() - t0;
  ok = ok && dt < 1.0;
  report(2, ok,
         "second-order kernel integral: worst rel err " + fmt(worst) +
             " (need <= 1e-9) over 3 parameter sets, " + fmt(dt * 1e3) + " ms");
}

// ------------------------------------------------- 3: scattering oracle

void criterion_3() {
  bool agree = true;
  double worst = 0.0;
  for (double ratio : {0.01, 0.1, 0.5}) {
    PotentialParams p{ratio, 1.0};
    const double oracle =
        scattering_length(p, ScatteringMethod::closed_form_oracle).a.value;
    const double shot = scattering_length(p, ScatteringMethod::shooting).a.value;
    const double rel = std::abs(shot - oracle) / std::abs(oracle);
    worst = std::max(worst, rel);
    agree = agree && rel <= 1e-8;
  }
  // defect scaling across two decades of coupling
  auto defect_over_w2 = [](double w) {
    PotentialParams p{w, 1.0};
    const double a =
        scattering_length(p, ScatteringMethod::closed_form_oracle).a.value;
    const auto c = born_coefficients(p, 2);
    return std::abs(a - (c[0] + c[1])) / p.a0 / (w * w);
  };
  double cmin = 1e300, cmax = 0.0;
  for (double w : {1e-3, 1e-2, 1e-1}) {
    const double c = defect_over_w2(w);
    cmin = std::min(cmin, c);
    cmax = std::max(cmax, c);
  }
  const bool scaling = cmax / cmin <= 2.0;
  report(3, agree && scaling,
         "scattering: shooting vs closed form worst rel " + fmt(worst) +
             " (<= 1e-8); quadratic-defect spread x" + fmt(cmax / cmin) +
             " (<= 2) across two decades");
}

// ------------------------------------------------- 4: sqrt(Y) coefficient

std::vector<double> log_ys(double lo, double hi, int n) {
  std::vector<double> ys(n);
  for (int i = 0; i < n; ++i) ys[i] = lo * std::pow(hi / lo, i / double(n - 1));
  return ys;
}

void criterion_4() {
  const double t0 = now_s();
  const double d = 0.05;
  const auto ys = log_ys(1e-8, 1e-5, 8);
  std::vector<double> js(ys.size());
  par::for_each_index(ys.size(), [&](std::size_t i) {
    const GasParams g = gas_params(ys[i], d);
    js[i] = bogoliubov_integral(g.rho, g.p).value;
  });
  std::vector<std::pair<double, double>> rows;
  for (std::size_t i = 0; i < ys.size(); ++i) rows.emplace_back(ys[i], js[i]);
  const FitResult fit = sqrt_y_fit(rows);
  const double required = lhy_slope();  // magnitude; convention fixes the sign
  const bool slope_ok =
      std::abs(std::abs(fit.c1) - required) / required <= 0.02;

  bool const_ok = true;
  double worst_const = 0.0;
  for (std::size_t i = 0; i < ys.size(); ++i) {
    const double c0_i = js[i] + required * std::sqrt(ys[i]);
    const double target = (5.0 / 16.0) * std::pow(ys[i], 0.5 - d);  // |a1|/a0
    const double rel = std::abs(c0_i - target) / target;
    worst_const = std::max(worst_const, rel);
    const_ok = const_ok && rel <= 0.01;
  }
  const double dt = now_s() - t0;
  report(4, slope_ok && const_ok && dt < 60.0,
         "sqrt(Y) coefficient from the energy integral at d = 0.05: measured "
         "c1 = " +
             fmt(fit.c1) + " vs required -" + fmt(required) +
             " +/- 2%; worst per-point constant-term rel err " +
             fmt(worst_const) +
             " (need <= 0.01); convention: J = |a1|/a0 - (128/(15 sqrt(pi))) "
             "sqrt(Y); " +
             fmt(dt) + " s");
}

// ------------------------------------------------- 5: lower-bound integral

void criterion_5() {
  const Rat dr(1, 100), br(7, 200);
  const double d = dr.to_double(), b = br.to_double(), t = 0.1, Cp = 0.5;
  const auto ys = log_ys(1e-8, 1e-5, 8);

  std::vector<double> in(ys.size()), jn(ys.size());
  std::vector<int> bad(ys.size(), 0);
  par::for_each_index(ys.size(), [&](std::size_t i) {
    const GasParams g = gas_params(ys[i], d);
    const double ell = std::pow(ys[i], -0.5 - b);
    const double n = g.rho * ell * ell * ell;
    const LowerBoundKernels lb =
        lower_bound_integral(g.rho, g.p, ell, t, n, Cp);
    const double norm = 4.0 * PI * g.rho;
    in[i] = lb.I.value / norm;
    jn[i] = bogoliubov_integral(g.rho, g.p).value;
    if (!(lb.I.value >= 0.0)) bad[i] = 1;
    if (!(lb.I.value <= lb.crude_bound * (1.0 + 1e-12) + lb.I.err)) bad[i] = 2;
    if (!lb.fg_ok || lb.pointwise_worst > 1e-10) bad[i] = 3;
  });
  bool bounds_ok = true;
  for (int f : bad) bounds_ok = bounds_ok && (f == 0);

  std::vector<std::pair<double, double>> irows, jrows;
  for (std::size_t i = 0; i < ys.size(); ++i) {
    irows.emplace_back(ys[i], in[i]);
    jrows.emplace_back(ys[i], jn[i]);
  }
  const FitResult fi = sqrt_y_fit(irows);
  const FitResult fj = sqrt_y_fit(jrows);
  const double rel0 = std::abs(fi.c0 - fj.c0) / std::abs(fj.c0);
  const double rel1 = std::abs(fi.c1 - fj.c1) / std::abs(fj.c1);
  const bool match = rel0 <= 0.03 && rel1 <= 0.03;
  report(5, bounds_ok && match,
         "dropped-terms integral (witness exponents, C't = 0.05): coefficient "
         "gaps vs the energy-integral sweep c0 " +
             fmt(rel0 * 100) + "%, c1 " + fmt(rel1 * 100) +
             "% (need <= 3%); exact bounds 0 <= I <= crude " +
             (bounds_ok ? "held" : "VIOLATED"));
}

// ------------------------------------------------- 6: kernel positivity

void criterion_6() {
  const double t = 0.1;
  const LocalizationProfile lp = localization_profiles(t);
  std::vector<double> omegas = log_ys(0.05, 20.0, 10);
  std::vector<double> nus = log_ys(1.0, 1e6, 25);
  const C1Estimate est = estimate_c1(t, omegas, nus);

  bool grid_ok = true;
  int tested = 0;
  if (est.finite) {
    const std::vector<double> nu10 = log_ys(1.0, 1e6, 10);
    for (double w : omegas) {
      for (double nu : nu10) {
        if (std::min(1.0, w) * nu * t < 2.0 * est.C1) continue;
        SlidingKernelParams sk;
        sk.nu = nu;
        sk.omega = w;
        sk.lp = &lp;
        const KernelTransform kt = sliding_kernel_transform(sk);
        ++tested;
        grid_ok = grid_ok && kt.min_F > 0.0;
      }
    }
  }

  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> box(-0.45, 0.45);
  const double R0 = 0.08, R = 0.06;
  std::uniform_real_distribution<double> off(-3.0 * R0, 3.0 * R0);
  double worst_res = 0.0;
  for (int i = 0; i < 20; ++i) {
    std::array<double, 3> x{}, y{};
    for (int j = 0; j < 3; ++j) {
      x[j] = box(rng);
      y[j] = x[j] + off(rng);
    }
    worst_res = std::max(worst_res, averaging_identity_residual(x, y, lp, R, R0));
  }
  const bool avg_ok = worst_res <= 1e-6;
  report(6, est.finite && grid_ok && tested > 0 && avg_ok,
         "kernel positivity at t = 0.1: threshold constant C1 = " +
             fmt(est.C1) + (est.finite ? " (finite)" : " (NOT finite)") +
             "; " + std::to_string(tested) +
             " grid points above 2x threshold all positive: " +
             (grid_ok ? "yes" : "NO") + "; averaging residual max " +
             fmt(worst_res) + " (<= 1e-6)");
}

// ------------------------------------------------- 7: quadratic-form bound

void criterion_7() {
  const double As[] = {0.5, 1.0, 2.0, 5.0, 10.0};
  const double ratios[] = {0.1, 0.3, 0.5, 0.8, 0.95};
  const double kappas[] = {0.0, 0.5, 2.0};
  bool positive = true, equality = true;
  double min_slack = 1e300, worst_eq = 0.0;
  for (double A : As)
    for (double r : ratios)
      for (double k : kappas) {
        QuadraticFormParams qf;
        qf.A = A;
        qf.B = r * A;
        qf.kappa = std::complex<double>(k, 0.0);
        const QuadraticBoundCheck qc = quadratic_bound_check(qf, 1.0, 30);
        min_slack = std::min(min_slack, qc.slack);
        positive = positive && qc.slack >= -1e-8;
        if (k == 0.0) {
          worst_eq = std::max(worst_eq, std::abs(qc.slack));
          equality = equality && std::abs(qc.slack) <= 1e-6;
        }
      }
  // convergence under cutoff doubling at the hardest corner; the truncation
  // error contracts like (B/(A+sqrt(A^2-B^2)))^(2 cutoff) ~ 0.72^(2 cutoff)
  // here, so the smaller cutoff must reach 35 for a 1e-8 comparison
  QuadraticFormParams hard;
  hard.A = 10.0;
  hard.B = 9.5;
  const double e35 = quadratic_bound_check(hard, 1.0, 35).lhs_min_eig;
  const double e70 = quadratic_bound_check(hard, 1.0, 70).lhs_min_eig;
  const bool doubling = std::abs(e70 - e35) <= 1e-8 * (1.0 + std::abs(e70));
  report(7, positive && equality && doubling,
         "quadratic-form bound on 5x5x3 grid: min slack " + fmt(min_slack) +
             " (>= -1e-8); kappa = 0 worst |slack| " + fmt(worst_eq) +
             " (<= 1e-6); cutoff doubling shift " + fmt(std::abs(e70 - e35)));
}

// ------------------------------------------------- 8: desk-scale sandwich

void criterion_8() {
  struct Cfg {
    int n, cutoff;
    double a0, R0, Rr, rho;  // rho < 0: neutral
  };
  const Cfg cfgs[] = {{2, 2, 0.02, 0.08, 0.75, -1.0},
                      {3, 3, 0.02, 0.08, 0.75, -1.0},
                      {4, 4, 0.01, 0.10, 0.60, -1.0},
                      {5, 5, 0.03, 0.07, 0.75, -1.0},
                      {6, 6, 0.02, 0.08, 0.75, 5.0}};
  const ExponentTriple e{Rat(1, 100), Rat(7, 200), Rat(3, 250)};
  const LocalizationProfile lp = localization_profiles(0.1);
  const ModeSet ms = ModeSet::cube(1);

  bool ordered = true, exact_props = true;
  std::string detail;
  for (const Cfg& c : cfgs) {
    const TruncatedFockSpace fs = TruncatedFockSpace::build(ms, c.n, c.cutoff);
    const PotentialParams p{c.a0, c.R0};
    const double rho = c.rho > 0.0 ? c.rho : double(c.n);
    const double R = c.Rr * c.R0;
    const SandwichRecord rec = sandwich_report(fs, rho, p, lp, R, 1.0, e);
    ordered = ordered && rec.ordered;

    const BoxHamiltonian H = build_box_hamiltonian(fs, rho, p, lp, R, 1.0);
    const auto dense = H.dense();
    const std::size_t N = H.dim();
    double asym = 0.0;
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t j = i + 1; j < N; ++j)
        asym = std::max(asym, std::abs(dense[i * N + j] - dense[j * N + i]));
    bool nconv = true;
    for (std::size_t r = 0; r < N && nconv; ++r)
      for (std::size_t idx = H.row_ptr[r]; idx < H.row_ptr[r + 1]; ++idx) {
        int tr = 0, tc = 0;
        for (std::size_t m = 0; m < fs.states[r].size(); ++m) {
          tr += fs.states[r][m];
          tc += fs.states[H.col[idx]][m];
        }
        if (tr != tc) nconv = false;
      }
    const auto dk = H.band_profile();
    bool band = true;
    for (std::size_t k = 3; k < dk.size(); ++k) band = band && dk[k] == 0.0;
    exact_props = exact_props && asym == 0.0 && nconv && band;
    if (!rec.ordered)
      detail += " [n=" + std::to_string(c.n) + ": lower " +
                fmt(rec.lower_chain) + " exact " + fmt(rec.exact) + " upper " +
                fmt(rec.upper_variational) + "]";
  }
  report(8, ordered && exact_props,
         std::string("desk-scale sandwich on 5 configurations: ordering ") +
             (ordered ? "held" : "FAILED") + ", symmetry/number/band " +
             (exact_props ? "exact" : "VIOLATED") + detail);
}

// ------------------------------------------------- 9: band localization

void criterion_9() {
  const BandCalibration cal = calibrate_band_constant(200, 200, 0x5eed);
  const bool calibrated = cal.C_meas > 0.0 && cal.stable && cal.failures == 0;

  const std::size_t N = 40;
  std::vector<double> A(N * N, 0.0);
  for (std::size_t i = 0; i < N; ++i) A[i * N + i] = 0.1 * double(i) - 2.0;
  std::vector<double> psi(N, 0.0);
  psi[0] = 1.0;
  const BandLocalization bl = band_localization(A, N, psi, 10, cal.C_meas);
  const bool diag_ok = bl.ok && bl.correction == 0.0 &&
                       std::abs(bl.value - bl.lambda) == 0.0;
  report(9, calibrated && diag_ok,
         "band localization: C_meas = " + fmt(cal.C_meas) + ", validation max " +
             fmt(cal.validation_max_ratio) + ", failures " +
             std::to_string(cal.failures) + "/200; diagonal case " +
             (diag_ok ? "exact with zero correction" : "FAILED"));
}

// ------------------------------------------------- 10: determinism

std::string run_cmd(const std::string& cmd, int& code) {
  std::string out;
  FILE* f = popen((cmd + " 2>/dev/null").c_str(), "r");
  if (!f) {
    code = -1;
    return out;
  }
  char buf[4096];
  std::size_t got;
  while ((got = fread(buf, 1, sizeof(buf), f)) > 0) out.append(buf, got);
  code = pclose(f);
  return out;
}

std::string strip_timestamp(const std::string& s) {
  std::istringstream in(s);
  std::string line, out;
  while (std::getline(in, line))
    if (line.find("\"timestamp\"") == std::string::npos) out += line + "\n";
  return out;
}

void criterion_10(const char* cli) {
  if (!cli) {
    report(10, false, "determinism: no driver binary path given");
    return;
  }
  const std::string base = std::string("'") + cli + "'";
  const std::vector<std::string> cmds = {
      base + " exponents max-d",
      base + " bogoliubov-integral --y 1e-6 --d 0.05",
      base + " sweep --quantity phi4 --y 1e-7:1e-5:5 --format csv",
      base + " averaging-identity --pairs 5 --seed 99",
  };
  bool ok = true;
  std::string why;
  for (const auto& c : cmds) {
    int r1 = 0, r2 = 0;
    const std::string o1 =
        strip_timestamp(run_cmd("LHYLAB_THREADS=1 " + c, r1));
    const std::string o2 =
        strip_timestamp(run_cmd("LHYLAB_THREADS=4 " + c, r2));
    if (r1 != 0 || r2 != 0 || o1.empty() || o1 != o2) {
      ok = false;
      why = " (first divergence: " + c + ")";
      break;
    }
  }
  report(10, ok,
         "determinism: 4 driver invocations byte-identical across thread "
         "counts after timestamp strip" +
             why);
}

}  // namespace

int main(int argc, char** argv) {
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10(argc > 1 ? argv[1] : nullptr);
  std::printf("%d of 10 criteria failed\n", g_failures);
  return g_failures;
}
