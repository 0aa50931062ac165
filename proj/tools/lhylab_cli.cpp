// lhylab: one binary driving every computation in the library.
//
// Each subcommand emits a single JSON report on stdout; `sweep --format csv`
// emits the fixed-schema CSV table instead. --out mirrors the emitted bytes
// to a file. Exit codes: 0 success, 2 invalid arguments or failed validation,
// 3 numerical non-convergence. A sweep with some failed rows still exits 0:
// the failures ride along as per-row error fields plus top-level warnings.
//
// Configuration: --config FILE loads a JSON object with one flat section per
// command ("scattering", "exponents-check", "fock-sandwich", ...); explicit
// command-line flags override file values, file values override defaults.

#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "lhylab/bogoliubov.hpp"
#include "lhylab/common.hpp"
#include "lhylab/exponents.hpp"
#include "lhylab/fock.hpp"
#include "lhylab/lower_bound.hpp"
#include "lhylab/parallel.hpp"
#include "lhylab/potentials.hpp"
#include "lhylab/report.hpp"
#include "lhylab/scattering.hpp"

namespace {

using nlohmann::json;
using namespace lhy;

constexpr const char* kVersion = "1.0.0";
constexpr const char* kSignConvention =
    "J = |a1|/a0 - (128/(15 sqrt(pi))) sqrt(Y)";

struct ExitWith {
  int code;
  std::string message;
};

json ve(const ValErr& v) { return json{{"value", v.value}, {"err", v.err}}; }

json rat_json(const Rat& r) {
  return json{{"str", r.str()}, {"value", r.to_double()}};
}

Rat parse_rat(const std::string& s) {
  long long p = 0, q = 1;
  char extra = 0;
  if (std::sscanf(s.c_str(), "%lld/%lld%c", &p, &q, &extra) == 2)
    return Rat(p, q);
  if (std::sscanf(s.c_str(), "%lld%c", &p, &extra) == 1) return Rat(p, 1);
  throw ExitWith{2, "expected a rational like 1/69 or an integer, got: " + s};
}

// lo:hi:n -> n log-spaced points with both ends included
std::vector<double> parse_log_range(const std::string& s) {
  double lo = 0, hi = 0;
  int n = 0;
  char extra = 0;
  if (std::sscanf(s.c_str(), "%lf:%lf:%d%c", &lo, &hi, &n, &extra) != 3 ||
      !(lo > 0.0) || !(hi >= lo) || n < 1)
    throw ExitWith{2, "expected a range like 1e-8:1e-5:8, got: " + s};
  std::vector<double> pts;
  if (n == 1 || hi == lo) {
    pts.push_back(lo);
    return pts;
  }
  const double r = std::log(hi / lo) / (n - 1);
  for (int i = 0; i < n; ++i) pts.push_back(lo * std::exp(r * i));
  pts.back() = hi;
  return pts;
}

json section(const json& cfg, const std::string& name) {
  auto it = cfg.find(name);
  if (it != cfg.end() && it->is_object()) return *it;
  return json::object();
}

// explicit flag > config file value > built-in default (already in var)
template <class T>
void merge_cfg(const CLI::App* cmd, const std::string& flag, const json& sec,
               const std::string& key, T& var) {
  if (cmd->count(flag) > 0) {
    var = cmd->get_option(flag)->as<T>();
    return;
  }
  auto it = sec.find(key);
  if (it == sec.end()) return;
  try {
    var = it->get<T>();
  } catch (const json::exception&) {
    throw ExitWith{2, "config key '" + key + "' has the wrong type"};
  }
}

void attach_metadata(Report& rep) {
  rep.results["metadata"] = json{{"version", kVersion},
                                 {"config_hash", rep.config_hash()},
                                 {"sign_convention", kSignConvention}};
}

int emit(Report& rep, const std::string& out_path, int code,
         const std::string& body_override = "") {
  attach_metadata(rep);
  const std::string body =
      body_override.empty() ? rep.serialize(true) : body_override;
  std::fwrite(body.data(), 1, body.size(), stdout);
  std::fflush(stdout);
  if (!out_path.empty()) {
    std::ofstream f(out_path, std::ios::binary);
    if (!f) throw ExitWith{2, "cannot open output file: " + out_path};
    f << body;
  }
  return code;
}

void require(bool ok, const std::string& msg) {
  if (!ok) throw ExitWith{2, msg};
}

// ---------------------------------------------------------------- scattering

int run_scattering(const CLI::App* cmd, const json& sec, Report& rep,
                   const std::string& out) {
  double a0 = 0.1, r0 = 1.0, tol = 1e-11;
  int order = 2;
  std::string method = "oracle";
  merge_cfg(cmd, "--a0", sec, "a0", a0);
  merge_cfg(cmd, "--r0", sec, "r0", r0);
  merge_cfg(cmd, "--tol", sec, "tol", tol);
  merge_cfg(cmd, "--order", sec, "order", order);
  merge_cfg(cmd, "--method", sec, "method", method);
  require(a0 > 0.0, "scattering: --a0 must be > 0");
  require(r0 > 0.0, "scattering: --r0 must be > 0");
  require(tol > 0.0 && tol < 1e-2, "scattering: --tol out of range");
  require(order >= 0 && order <= 2, "scattering: --order must be 0..2");

  ScatteringMethod m;
  if (method == "oracle")
    m = ScatteringMethod::closed_form_oracle;
  else if (method == "shooting")
    m = ScatteringMethod::shooting;
  else if (method == "born")
    m = ScatteringMethod::born;
  else
    throw ExitWith{2, "scattering: --method must be oracle|shooting|born"};

  rep.params = {{"a0", a0}, {"r0", r0}, {"tol", tol},
                {"order", order}, {"method", method}};

  PotentialParams p{a0, r0};
  const ScatteringSolution sol = scattering_length(p, m, tol);
  const auto born = born_coefficients(p, order);
  rep.results["a"] = ve(sol.a);
  rep.results["a_over_a0"] = ve(ValErr{sol.a.value / a0, sol.a.err / a0});
  rep.results["z0"] = sol.z0;
  rep.results["steps"] = sol.steps;
  rep.results["rmax"] = sol.rmax;
  rep.results["born_coefficients"] = born;
  const ValErr ki = born_kernel_integral_quadrature(p);
  rep.results["kernel_integral"] = ve(ki);
  rep.results["kernel_integral_closed_form"] = born_kernel_integral_closed_form(p);
  if (!std::isfinite(sol.a.value)) {
    rep.errors.push_back("scattering solve did not converge");
    return emit(rep, out, 3);
  }
  return emit(rep, out, 0);
}

// --------------------------------------------------------------- upper bound

int run_upper_bound(const CLI::App* cmd, const json& sec, Report& rep,
                    const std::string& out) {
  double y = 1e-6, d = 0.05, a0 = 1.0;
  int grid_n = 240;
  merge_cfg(cmd, "--y", sec, "y", y);
  merge_cfg(cmd, "--d", sec, "d", d);
  merge_cfg(cmd, "--a0", sec, "a0", a0);
  merge_cfg(cmd, "--grid", sec, "grid", grid_n);
  require(grid_n >= 16 && grid_n <= 20000, "upper-bound: --grid out of range");
  rep.params = {{"y", y}, {"d", d}, {"a0", a0}, {"grid", grid_n}};

  const GasParams g = gas_params(y, d, a0);
  const double kph = k_phonon(g.rho, g.p);
  std::vector<double> grid(grid_n);
  const double klo = 1e-3 * kph, khi = 1e3 / g.p.R0;
  for (int i = 0; i < grid_n; ++i)
    grid[i] = klo * std::pow(khi / klo, double(i) / (grid_n - 1));
  const TrialFunction tf = optimal_psi(g.rho, g.p, grid);
  const DepletionReport dep = depletion_and_convolutions(tf, g.rho, g.p);
  const UpperBoundReport ub = variational_energy(tf, g.rho, g.p);

  rep.results["Y"] = y;
  rep.results["eps"] = eps_of(y, d);
  rep.results["rho"] = g.rho;
  rep.results["R0"] = g.p.R0;
  rep.results["mean_field"] = ub.mean_field;
  rep.results["energy_per_particle"] = ve(ub.energy_per_particle);
  rep.results["normalized"] = ve(ub.normalized);
  rep.results["J"] = ve(ub.main_integral);
  rep.results["discrepancy"] = ub.discrepancy;
  rep.results["rho0"] = ub.rho0;
  rep.results["depletion_fraction"] = (g.rho - ub.rho0) / g.rho;
  rep.results["i1_bound_const"] = dep.i1_bound_const;
  rep.results["i2_bound_const"] = dep.i2_bound_const;
  if (!std::isfinite(ub.energy_per_particle.value)) {
    rep.errors.push_back("variational energy quadrature failed");
    return emit(rep, out, 3);
  }
  return emit(rep, out, 0);
}

// ------------------------------------------------------- bogoliubov integral

int run_bog_integral(const CLI::App* cmd, const json& sec, Report& rep,
                     const std::string& out) {
  double y = 1e-6, d = 0.05, a0 = 1.0, eps = -1.0;
  merge_cfg(cmd, "--y", sec, "y", y);
  merge_cfg(cmd, "--d", sec, "d", d);
  merge_cfg(cmd, "--a0", sec, "a0", a0);
  merge_cfg(cmd, "--eps", sec, "eps", eps);

  if (eps > 0.0) {
    rep.params = {{"eps", eps}};
    const ValErr phi4 = phi4_of_eps(eps);
    rep.results["eps"] = eps;
    rep.results["phi4"] = ve(phi4);
    rep.results["phi4_limit_eps0"] = 5.0 * PI / 64.0;
    rep.results["phi4_slope_eps0"] = -8.0 * std::sqrt(2.0) / 15.0;
    return emit(rep, out, 0);
  }

  rep.params = {{"y", y}, {"d", d}, {"a0", a0}};
  const GasParams g = gas_params(y, d, a0);
  const ValErr J = bogoliubov_integral(g.rho, g.p);
  rep.results["Y"] = y;
  rep.results["eps"] = eps_of(y, d);
  rep.results["J"] = ve(J);
  rep.results["lhy_slope"] = lhy_slope();
  if (!std::isfinite(J.value)) {
    rep.errors.push_back("integral quadrature failed");
    return emit(rep, out, 3);
  }
  return emit(rep, out, 0);
}

// ------------------------------------------------------ lower bound integral

int run_lower_bound(const CLI::App* cmd, const json& sec, Report& rep,
                    const std::string& out) {
  double y = 1e-6, d = 0.01, b = 0.035, t = 0.1, a0 = 1.0;
  double n_ratio = 1.0, cprime = 0.5, comega = -1.0;
  merge_cfg(cmd, "--y", sec, "y", y);
  merge_cfg(cmd, "--d", sec, "d", d);
  merge_cfg(cmd, "--b", sec, "b", b);
  merge_cfg(cmd, "--t", sec, "t", t);
  merge_cfg(cmd, "--a0", sec, "a0", a0);
  merge_cfg(cmd, "--n-ratio", sec, "n_ratio", n_ratio);
  merge_cfg(cmd, "--cprime", sec, "cprime", cprime);
  merge_cfg(cmd, "--comega", sec, "comega", comega);
  require(b > 0.0 && b < 1.0 / 6.0, "lower-bound-i: --b must be in (0, 1/6)");
  require(t > 0.0 && t < 0.5, "lower-bound-i: --t must be in (0, 1/2)");
  require(n_ratio > 0.0, "lower-bound-i: --n-ratio must be > 0");
  rep.params = {{"y", y},       {"d", d},          {"b", b},
                {"t", t},       {"a0", a0},        {"n_ratio", n_ratio},
                {"cprime", cprime}, {"comega", comega}};

  const GasParams g = gas_params(y, d, a0);
  const double ell = a0 * std::pow(y, -0.5 - b);
  const double n = n_ratio * g.rho * ell * ell * ell;
  const LowerBoundKernels lb =
      lower_bound_integral(g.rho, g.p, ell, t, n, cprime, comega);
  const AprioriReport ap = apriori_thresholds(g.rho, g.p, ell, t, n, comega);

  const double norm = 4.0 * PI * g.rho * a0;
  rep.results["Y"] = y;
  rep.results["ell"] = ell;
  rep.results["t"] = t;
  rep.results["n"] = n;
  rep.results["I"] = ve(lb.I);
  rep.results["I_normalized"] = ve(ValErr{lb.I.value / norm, lb.I.err / norm});
  rep.results["fg_ok"] = lb.fg_ok;
  rep.results["k_violation"] = lb.k_violation;
  rep.results["min_f_minus_g"] = lb.min_f_minus_g;
  rep.results["low_part"] = ve(lb.low_part);
  rep.results["high_part"] = ve(lb.high_part);
  rep.results["chain_bound"] = lb.chain_bound;
  rep.results["crude_bound"] = lb.crude_bound;
  rep.results["crude_quadrature"] = ve(lb.crude_quadrature);
  rep.results["pointwise_worst"] = lb.pointwise_worst;
  rep.results["gamma"] = lb.gamma;
  rep.results["R"] = lb.R;
  rep.results["omega_t"] = lb.omega_t;
  rep.results["apriori"] = json{{"certificate", ap.certificate},
                                {"n_threshold", ap.n_threshold},
                                {"nonneg", ap.nonneg},
                                {"depletion_scale", ap.depletion_scale},
                                {"regime_ok", ap.regime_ok}};
  if (!lb.fg_ok) {
    rep.errors.push_back("square-root argument not positive on the check grid");
    return emit(rep, out, 3);
  }
  if (!std::isfinite(lb.I.value)) {
    rep.errors.push_back("integral quadrature failed");
    return emit(rep, out, 3);
  }
  return emit(rep, out, 0);
}

// ----------------------------------------------------------- kernel positivity

int run_kernel_positivity(const CLI::App* cmd, const json& sec, Report& rep,
                          const std::string& out) {
  double t = 0.1, nu = -1.0, omega = -1.0;
  std::string omega_range = "0.05:20:10", nu_range = "1:1e6:25";
  merge_cfg(cmd, "--t", sec, "t", t);
  merge_cfg(cmd, "--nu", sec, "nu", nu);
  merge_cfg(cmd, "--omega", sec, "omega", omega);
  merge_cfg(cmd, "--omega-range", sec, "omega_range", omega_range);
  merge_cfg(cmd, "--nu-range", sec, "nu_range", nu_range);
  require(t > 0.0 && t < 0.5, "kernel-positivity: --t must be in (0, 1/2)");

  const LocalizationProfile lp = localization_profiles(t);

  if (nu > 0.0 || omega > 0.0) {
    require(nu > 0.0 && omega > 0.0,
            "kernel-positivity: give both --nu and --omega, or neither");
    rep.params = {{"t", t}, {"nu", nu}, {"omega", omega}};
    SlidingKernelParams sk;
    sk.nu = nu;
    sk.omega = omega;
    sk.lp = &lp;
    const KernelTransform kt = sliding_kernel_transform(sk);
    rep.results["F0"] = kt.F0;
    rep.results["min_F"] = kt.min_F;
    rep.results["min_F_p"] = kt.min_F_p;
    rep.results["min_F_diag"] = kt.min_F_diag;
    rep.results["tail_coeff"] = kt.tail_coeff;
    rep.results["positive"] = (kt.min_F > 0.0 && kt.min_F_diag > 0.0);
    rep.results["c2"] = lp.c2;
    return emit(rep, out, 0);
  }

  rep.params = {{"t", t}, {"omega_range", omega_range}, {"nu_range", nu_range}};
  const std::vector<double> omegas = parse_log_range(omega_range);
  const std::vector<double> nus = parse_log_range(nu_range);
  const C1Estimate est = estimate_c1(t, omegas, nus);
  rep.results["C1"] = est.C1;
  rep.results["finite"] = est.finite;
  rep.results["t"] = est.t;
  rep.results["omegas"] = est.omegas;
  rep.results["thresholds"] = est.thresholds;
  rep.results["c1_frozen"] = c1_default();
  rep.results["c2"] = lp.c2;
  if (!est.finite) {
    rep.errors.push_back("no finite positivity threshold found on the grid");
    return emit(rep, out, 3);
  }
  return emit(rep, out, 0);
}

// ---------------------------------------------------------- averaging identity

int run_averaging_identity(const CLI::App* cmd, const json& sec, Report& rep,
                           const std::string& out, std::uint64_t seed) {
  double t = 0.1, r_over_r0 = 0.75, r0_over_ell = 0.08;
  int pairs = 20;
  merge_cfg(cmd, "--t", sec, "t", t);
  merge_cfg(cmd, "--r-over-r0", sec, "r_over_r0", r_over_r0);
  merge_cfg(cmd, "--r0-over-ell", sec, "r0_over_ell", r0_over_ell);
  merge_cfg(cmd, "--pairs", sec, "pairs", pairs);
  require(t > 0.0 && t < 0.5, "averaging-identity: --t must be in (0, 1/2)");
  require(r_over_r0 > 0.0 && r_over_r0 < 1.0,
          "averaging-identity: --r-over-r0 must be in (0, 1)");
  require(r0_over_ell > 0.0 && r0_over_ell < 0.25,
          "averaging-identity: --r0-over-ell must be in (0, 1/4)");
  require(pairs >= 1 && pairs <= 10000, "averaging-identity: --pairs out of range");
  rep.params = {{"t", t},
                {"r_over_r0", r_over_r0},
                {"r0_over_ell", r0_over_ell},
                {"pairs", pairs},
                {"seed", seed}};

  const LocalizationProfile lp = localization_profiles(t);
  const double ell = 1.0;
  const double R0 = r0_over_ell * ell;
  const double R = r_over_r0 * R0;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> box(-0.45, 0.45);
  std::uniform_real_distribution<double> off(-3.0 * R0, 3.0 * R0);

  double worst = 0.0;
  json samples = json::array();
  for (int i = 0; i < pairs; ++i) {
    std::array<double, 3> x{}, yv{};
    for (int j = 0; j < 3; ++j) {
      x[j] = box(rng) * ell;
      yv[j] = x[j] + off(rng);
    }
    const double res = averaging_identity_residual(x, yv, lp, R, R0, ell);
    worst = std::max(worst, res);
    samples.push_back(json{{"x", x}, {"y", yv}, {"residual", res}});
  }
  rep.results["max_residual"] = worst;
  rep.results["pairs"] = samples;
  rep.results["ok"] = (worst <= 1e-6);
  if (!(worst <= 1e-6))
    rep.warnings.push_back("max residual above 1e-6");
  return emit(rep, out, 0);
}

// ------------------------------------------------------------------ exponents

json checks_json(const ExponentReport& er) {
  json arr = json::array();
  for (const auto& c : er.checks)
    arr.push_back(json{{"label", c.label},
                       {"system", c.system},
                       {"lhs", c.lhs.str()},
                       {"rhs", c.rhs.str()},
                       {"satisfied", c.satisfied}});
  return arr;
}

int run_exp_check(const CLI::App* cmd, const json& sec, Report& rep,
                  const std::string& out) {
  std::string ds = "1/100", bs = "7/200", ts = "3/250";
  merge_cfg(cmd, "--d", sec, "d", ds);
  merge_cfg(cmd, "--b", sec, "b", bs);
  merge_cfg(cmd, "--tau", sec, "tau", ts);
  rep.params = {{"d", ds}, {"b", bs}, {"tau", ts}};
  const ExponentTriple e{parse_rat(ds), parse_rat(bs), parse_rat(ts)};
  const ExponentReport er = check_exponents(e);
  rep.results["checks"] = checks_json(er);
  rep.results["all_ok"] = er.all_ok;
  rep.results["implication_ok"] = er.implication_ok;
  rep.results["nu0"] = rat_json(er.nu0);
  rep.results["mu0"] = rat_json(er.mu0);
  rep.results["alpha1"] = rat_json(er.alpha1);
  return emit(rep, out, 0);
}

int run_exp_maxd(const CLI::App* cmd, const json& sec, Report& rep,
                 const std::string& out) {
  std::string ws = "1/100";
  merge_cfg(cmd, "--witness-d", sec, "witness_d", ws);
  rep.params = {{"witness_d", ws}};
  const MaxDResult r = max_feasible_d(parse_rat(ws));
  rep.results["d0"] = r.d0.str();
  rep.results["d0_value"] = r.d0.to_double();
  rep.results["certificate"] = r.certificate;
  rep.results["witness"] = json{{"d", r.witness.d.str()},
                                {"b", r.witness.b.str()},
                                {"tau", r.witness.tau.str()}};
  rep.results["witness_ok"] = r.witness_ok;
  rep.results["lp_cross_check"] = r.lp_cross_check;
  return emit(rep, out, 0);
}

int run_exp_budget(const CLI::App* cmd, const json& sec, Report& rep,
                   const std::string& out) {
  std::string ds = "1/100", bs = "7/200", ts = "3/250";
  double y = 1e-6;
  merge_cfg(cmd, "--d", sec, "d", ds);
  merge_cfg(cmd, "--b", sec, "b", bs);
  merge_cfg(cmd, "--tau", sec, "tau", ts);
  merge_cfg(cmd, "--y", sec, "y", y);
  require(y > 0.0 && y < 1.0, "exponents budget: --y must be in (0, 1)");
  rep.params = {{"d", ds}, {"b", bs}, {"tau", ts}, {"y", y}};
  const ExponentTriple e{parse_rat(ds), parse_rat(bs), parse_rat(ts)};
  const ErrorBudget eb = error_budget(e, y);
  json entries = json::array();
  for (const auto& en : eb.entries)
    entries.push_back(json{{"label", en.label},
                           {"exponent", en.exponent.str()},
                           {"exponent_value", en.exponent.to_double()},
                           {"dominated", en.dominated},
                           {"required_above", en.required_above.str()},
                           {"magnitude", en.magnitude}});
  rep.results["entries"] = entries;
  rep.results["all_dominated"] = eb.all_dominated;
  rep.results["nu0"] = rat_json(eb.nu0);
  rep.results["mu0"] = rat_json(eb.mu0);
  rep.results["alpha1"] = rat_json(eb.alpha1);
  return emit(rep, out, 0);
}

// ----------------------------------------------------------------------- fock

struct FockGeom {
  double a0 = 0.02, r0 = 0.08, ell = 1.0, t = 0.1, r_over_r0 = 0.75;
  double rho = -1.0;  // < 0: neutral, n_total / ell^3
  int axis_max = 1, n_total = 4, cutoff = 4;

  void merge(const CLI::App* cmd, const json& sec) {
    merge_cfg(cmd, "--a0", sec, "a0", a0);
    merge_cfg(cmd, "--r0", sec, "r0", r0);
    merge_cfg(cmd, "--ell", sec, "ell", ell);
    merge_cfg(cmd, "--t", sec, "t", t);
    merge_cfg(cmd, "--r-over-r0", sec, "r_over_r0", r_over_r0);
    merge_cfg(cmd, "--rho", sec, "rho", rho);
    merge_cfg(cmd, "--axis-max", sec, "axis_max", axis_max);
    merge_cfg(cmd, "--n", sec, "n", n_total);
    merge_cfg(cmd, "--cutoff", sec, "cutoff", cutoff);
  }
  void validate() const {
    require(a0 >= 0.0, "fock: --a0 must be >= 0");
    require(r0 > 0.0, "fock: --r0 must be > 0");
    require(ell > 0.0, "fock: --ell must be > 0");
    require(t > 0.0 && t < 0.5, "fock: --t must be in (0, 1/2)");
    require(r_over_r0 > 0.0 && r_over_r0 < 1.0,
            "fock: --r-over-r0 must be in (0, 1)");
    require(axis_max >= 0 && axis_max <= 3, "fock: --axis-max must be 0..3");
    require(n_total >= 1 && n_total <= 12, "fock: --n must be 1..12");
    require(cutoff >= 1, "fock: --cutoff must be >= 1");
  }
  json params(std::uint64_t seed, bool with_seed = false) const {
    json j = {{"a0", a0},   {"r0", r0},         {"ell", ell},
              {"t", t},     {"r_over_r0", r_over_r0}, {"rho", rho},
              {"axis_max", axis_max}, {"n", n_total},  {"cutoff", cutoff}};
    if (with_seed) j["seed"] = seed;
    return j;
  }
  double rho_eff() const {
    return rho > 0.0 ? rho : n_total / (ell * ell * ell);
  }
};

int run_fock_build(const CLI::App* cmd, const json& sec, Report& rep,
                   const std::string& out) {
  FockGeom geo;
  geo.merge(cmd, sec);
  geo.validate();
  rep.params = geo.params(0);

  const ModeSet ms = ModeSet::cube(geo.axis_max);
  const TruncatedFockSpace fs =
      TruncatedFockSpace::build(ms, geo.n_total, geo.cutoff);
  const PotentialParams p{geo.a0, geo.r0};
  const LocalizationProfile lp = localization_profiles(geo.t);
  const double R = geo.r_over_r0 * geo.r0;
  const BoxHamiltonian H =
      build_box_hamiltonian(fs, geo.rho_eff(), p, lp, R, geo.ell);
  const GroundState gs = ground_state(H);

  rep.results["modes"] = ms.modes.size();
  rep.results["dim"] = fs.dim();
  rep.results["ground_energy"] = ve(ValErr{gs.energy, 1e-12 * std::abs(gs.energy)});
  rep.results["iterations"] = gs.iterations;
  rep.results["converged"] = gs.converged;
  rep.results["coupling"] = H.coupling;
  rep.results["w0000"] = H.w0000;
  rep.results["constant"] = H.constant;
  rep.results["band_profile"] = H.band_profile();
  if (!gs.converged) {
    rep.errors.push_back("eigensolve did not converge");
    return emit(rep, out, 3);
  }
  return emit(rep, out, 0);
}

int run_fock_quadratic(const CLI::App* cmd, const json& sec, Report& rep,
                       const std::string& out) {
  double A = 2.0, B = 1.0, kappa = 0.0, norm = 1.0, tol = 1e-9;
  int cutoff = 60;
  merge_cfg(cmd, "--A", sec, "A", A);
  merge_cfg(cmd, "--B", sec, "B", B);
  merge_cfg(cmd, "--kappa", sec, "kappa", kappa);
  merge_cfg(cmd, "--norm", sec, "norm", norm);
  merge_cfg(cmd, "--cutoff", sec, "cutoff", cutoff);
  merge_cfg(cmd, "--tol", sec, "tol", tol);
  require(A >= B && B > 0.0, "fock quadratic-check: need A >= B > 0");
  require(norm > 0.0, "fock quadratic-check: --norm must be > 0");
  require(cutoff >= 10 && cutoff <= 2000,
          "fock quadratic-check: --cutoff must be 10..2000");
  rep.params = {{"A", A},       {"B", B},           {"kappa", kappa},
                {"norm", norm}, {"cutoff", cutoff}, {"tol", tol}};

  QuadraticFormParams qf;
  qf.A = A;
  qf.B = B;
  qf.kappa = std::complex<double>(kappa, 0.0);
  const QuadraticBoundCheck qc = quadratic_bound_check(qf, norm, cutoff, tol);
  rep.results["lhs_min_eig"] = qc.lhs_min_eig;
  rep.results["rhs_bound"] = qc.rhs_bound;
  rep.results["slack"] = qc.slack;
  rep.results["cutoff_delta"] = qc.cutoff_delta;
  rep.results["converged"] = qc.converged;
  if (!qc.converged) {
    rep.errors.push_back("cutoff truncation not converged; raise --cutoff");
    return emit(rep, out, 3);
  }
  return emit(rep, out, 0);
}

int run_fock_localize(const CLI::App* cmd, const json& sec, Report& rep,
                      const std::string& out, std::uint64_t seed) {
  int pilot = 200, validation = 200;
  merge_cfg(cmd, "--pilot", sec, "pilot", pilot);
  merge_cfg(cmd, "--validation", sec, "validation", validation);
  require(pilot >= 1 && validation >= 1 && pilot + validation <= 100000,
          "fock localize: instance counts out of range");
  rep.params = {{"pilot", pilot}, {"validation", validation}, {"seed", seed}};

  const BandCalibration cal = calibrate_band_constant(pilot, validation, seed);
  rep.results["pilot_max_ratio"] = cal.pilot_max_ratio;
  rep.results["validation_max_ratio"] = cal.validation_max_ratio;
  rep.results["C_meas"] = cal.C_meas;
  rep.results["stable"] = cal.stable;
  rep.results["failures"] = cal.failures;
  if (!cal.stable)
    rep.warnings.push_back("validation set exceeded the calibrated constant");
  return emit(rep, out, 0);
}

int run_fock_sandwich(const CLI::App* cmd, const json& sec, Report& rep,
                      const std::string& out) {
  FockGeom geo;
  geo.merge(cmd, sec);
  geo.validate();
  std::string ds = "1/100", bs = "7/200", ts = "3/250";
  merge_cfg(cmd, "--d", sec, "d", ds);
  merge_cfg(cmd, "--b", sec, "b", bs);
  merge_cfg(cmd, "--tau", sec, "tau", ts);
  require(geo.a0 > 0.0, "fock sandwich: --a0 must be > 0");
  rep.params = geo.params(0);
  rep.params["d"] = ds;
  rep.params["b"] = bs;
  rep.params["tau"] = ts;

  const ModeSet ms = ModeSet::cube(geo.axis_max);
  const TruncatedFockSpace fs =
      TruncatedFockSpace::build(ms, geo.n_total, geo.cutoff);
  const PotentialParams p{geo.a0, geo.r0};
  const LocalizationProfile lp = localization_profiles(geo.t);
  const double R = geo.r_over_r0 * geo.r0;
  const ExponentTriple e{parse_rat(ds), parse_rat(bs), parse_rat(ts)};
  const SandwichRecord rec =
      sandwich_report(fs, geo.rho_eff(), p, lp, R, geo.ell, e);

  rep.results["Y"] = rec.Y;
  rep.results["exact"] = rec.exact;
  rep.results["minus_nI"] = rec.minus_nI;
  rep.results["charge_term"] = rec.charge_term;
  rep.results["desk_term"] = rec.desk_term;
  rep.results["budget_rel"] = rec.budget_rel;
  rep.results["lower_chain"] = rec.lower_chain;
  rep.results["upper_variational"] = rec.upper_variational;
  rep.results["cutoff_shift"] = rec.cutoff_shift;
  rep.results["ordered"] = rec.ordered;
  if (!rec.ordered)
    rep.warnings.push_back("sandwich ordering failed for this configuration");
  return emit(rep, out, 0);
}

// ---------------------------------------------------------------------- sweep

int run_sweep(const CLI::App* cmd, const json& sec, Report& rep,
              const std::string& out, const std::string& format) {
  std::string quantity = "bogoliubov-integral", y_range = "1e-8:1e-5:8";
  double d = 0.05, b = 0.035, tau = 0.012, t = 0.1, a0 = 1.0, cprime = 0.5;
  merge_cfg(cmd, "--quantity", sec, "quantity", quantity);
  merge_cfg(cmd, "--y", sec, "y", y_range);
  merge_cfg(cmd, "--d", sec, "d", d);
  merge_cfg(cmd, "--b", sec, "b", b);
  merge_cfg(cmd, "--tau", sec, "tau", tau);
  merge_cfg(cmd, "--t", sec, "t", t);
  merge_cfg(cmd, "--a0", sec, "a0", a0);
  merge_cfg(cmd, "--cprime", sec, "cprime", cprime);
  require(t > 0.0 && t < 0.5, "sweep: --t must be in (0, 1/2)");
  rep.params = {{"quantity", quantity}, {"y", y_range}, {"d", d},
                {"b", b},               {"tau", tau},   {"t", t},
                {"a0", a0},             {"cprime", cprime}};

  const bool known = quantity == "bogoliubov-integral" ||
                     quantity == "upper-bound" || quantity == "lower-bound-i" ||
                     quantity == "phi4" || quantity == "scattering-a";
  require(known, "sweep: unknown --quantity " + quantity +
                     " (bogoliubov-integral|upper-bound|lower-bound-i|phi4|"
                     "scattering-a)");
  const std::vector<double> ys = parse_log_range(y_range);

  std::vector<SweepRow> rows(ys.size());
  par::for_each_index(ys.size(), [&](std::size_t i) {
    SweepRow& r = rows[i];
    r.quantity = quantity;
    r.Y = ys[i];
    r.d = d;
    r.b = b;
    r.tau = tau;
    try {
      const GasParams g = gas_params(r.Y, d, a0);
      r.meta = "a0_over_R0=" + format_double(g.p.a0 / g.p.R0);
      if (quantity == "bogoliubov-integral") {
        const ValErr J = bogoliubov_integral(g.rho, g.p);
        r.value = J.value;
        r.err = J.err;
      } else if (quantity == "phi4") {
        const ValErr f = phi4_of_eps(eps_of(r.Y, d));
        r.value = f.value;
        r.err = f.err;
      } else if (quantity == "scattering-a") {
        const ScatteringSolution sol =
            scattering_length(g.p, ScatteringMethod::closed_form_oracle);
        r.value = sol.a.value / a0;
        r.err = 1e-15 * std::abs(r.value);
      } else if (quantity == "upper-bound") {
        const double kph = k_phonon(g.rho, g.p);
        std::vector<double> grid(160);
        const double klo = 1e-3 * kph, khi = 1e3 / g.p.R0;
        for (int j = 0; j < 160; ++j)
          grid[j] = klo * std::pow(khi / klo, j / 159.0);
        const UpperBoundReport ub =
            variational_energy(optimal_psi(g.rho, g.p, grid), g.rho, g.p);
        r.value = ub.normalized.value;
        r.err = ub.normalized.err;
      } else {  // lower-bound-i
        const double ell = a0 * std::pow(r.Y, -0.5 - b);
        const double n = g.rho * ell * ell * ell;
        const LowerBoundKernels lb =
            lower_bound_integral(g.rho, g.p, ell, t, n, cprime);
        const double norm = 4.0 * PI * g.rho * a0;
        if (!lb.fg_ok) throw std::runtime_error("f > g violated");
        r.value = lb.I.value / norm;
        r.err = lb.I.err / norm;
      }
      if (!std::isfinite(r.value)) throw std::runtime_error("non-finite value");
    } catch (const std::exception& ex) {
      r.value = 0.0;
      r.err = 0.0;
      r.error = ex.what();
    }
  });

  json jrows = json::array();
  std::vector<std::pair<double, double>> fit_pts;
  for (const auto& r : rows) {
    json jr = {{"quantity", r.quantity}, {"Y", r.Y},       {"d", r.d},
               {"b", r.b},               {"tau", r.tau},   {"value", r.value},
               {"err", r.err},           {"meta", r.meta}};
    if (!r.error.empty()) {
      jr["error"] = r.error;
      rep.warnings.push_back("row Y=" + format_double(r.Y) + ": " + r.error);
    } else {
      fit_pts.emplace_back(r.Y, r.value);
    }
    jrows.push_back(jr);
  }
  rep.results["rows"] = jrows;

  if (fit_pts.size() >= 2) {
    const FitResult fit = sqrt_y_fit(fit_pts);
    rep.results["fit"] = json{{"model", "value = c0 + c1*sqrt(Y)"},
                              {"c0", fit.c0},
                              {"c1", fit.c1},
                              {"residual", fit.fit_residual},
                              {"points", fit_pts.size()}};
  } else {
    rep.warnings.push_back("too few successful rows for a fit");
  }

  if (format == "csv") return emit(rep, out, 0, sweep_csv(rows));
  return emit(rep, out, 0);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical laboratory for the dilute Bose gas ground-state "
               "energy: scattering, quadratic-theory bounds, exact exponent "
               "arithmetic, truncated-Fock cross checks"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "print help for every subcommand");

  std::string config_path, out_path, format = "json";
  std::uint64_t seed = 12345;
  app.add_option("--config", config_path, "JSON config file; flags override");
  app.add_option("--out", out_path, "mirror the emitted bytes to this file");
  app.add_option("--format", format, "json|csv (csv applies to sweep only)")
      ->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--seed", seed, "seed for randomized checks");

  auto add = [&](CLI::App* parent, const char* name, const char* desc) {
    CLI::App* c = parent->add_subcommand(name, desc);
    c->fallthrough();  // global flags may come after the subcommand
    return c;
  };

  CLI::App* c_scat = add(&app, "scattering",
                         "zero-energy scattering length: closed-form oracle, "
                         "shooting solver, Born series");
  c_scat->add_option("--a0", "Born scattering length (> 0)");
  c_scat->add_option("--r0", "interaction range (> 0)");
  c_scat->add_option("--method", "oracle|shooting|born");
  c_scat->add_option("--tol", "shooting tolerance");
  c_scat->add_option("--order", "highest Born series index (0..2)");

  CLI::App* c_ub = add(&app, "upper-bound",
                       "variational ground-state energy per particle from the "
                       "quadratic-theory trial state");
  c_ub->add_option("--y", "gas parameter Y = rho a0^3");
  c_ub->add_option("--d", "range exponent, a0/R0 = Y^(1/2-d)");
  c_ub->add_option("--a0", "Born scattering length unit");
  c_ub->add_option("--grid", "trial-state grid size");

  CLI::App* c_bog = add(&app, "bogoliubov-integral",
                        "the closed-form energy integral J and its "
                        "small-coupling profile");
  c_bog->add_option("--y", "gas parameter");
  c_bog->add_option("--d", "range exponent");
  c_bog->add_option("--a0", "Born scattering length unit");
  c_bog->add_option("--eps", "evaluate the profile at this eps instead");

  CLI::App* c_lb = add(&app, "lower-bound-i",
                       "dropped-terms integral I of the lower-bound chain, "
                       "with split-bound and positivity cross checks");
  c_lb->add_option("--y", "gas parameter");
  c_lb->add_option("--d", "range exponent");
  c_lb->add_option("--b", "box exponent, a0/ell = Y^(b+1/2)");
  c_lb->add_option("--t", "boundary-layer fraction (direct, < 1/2)");
  c_lb->add_option("--a0", "Born scattering length unit");
  c_lb->add_option("--n-ratio", "n / (rho ell^3)");
  c_lb->add_option("--cprime", "sound-speed safety factor in f");
  c_lb->add_option("--comega", "subtraction rate scale (< 0: default)");

  CLI::App* c_kp = add(&app, "kernel-positivity",
                       "Fourier positivity of the sliding correction kernel; "
                       "threshold constant estimation");
  c_kp->add_option("--t", "boundary-layer fraction");
  c_kp->add_option("--nu", "decay rate ell/R (single-point mode)");
  c_kp->add_option("--omega", "subtraction rate (single-point mode)");
  c_kp->add_option("--omega-range", "lo:hi:n grid for threshold estimation");
  c_kp->add_option("--nu-range", "lo:hi:n bracket grid for thresholds");

  CLI::App* c_ai = add(&app, "averaging-identity",
                       "residual of the translation-average identity at "
                       "random point pairs");
  c_ai->add_option("--t", "boundary-layer fraction");
  c_ai->add_option("--r-over-r0", "kernel range over interaction range");
  c_ai->add_option("--r0-over-ell", "interaction range over box length");
  c_ai->add_option("--pairs", "number of random point pairs");

  CLI::App* c_exp = add(&app, "exponents",
                        "exact rational arithmetic on the scaling-exponent "
                        "inequality system");
  c_exp->require_subcommand(1);
  CLI::App* c_exp_check =
      add(c_exp, "check", "evaluate every inequality at a given triple");
  c_exp_check->add_option("--d", "range exponent (rational, e.g. 1/100)");
  c_exp_check->add_option("--b", "box exponent (rational)");
  c_exp_check->add_option("--tau", "boundary-layer exponent (rational)");
  CLI::App* c_exp_maxd =
      add(c_exp, "max-d", "supremum of feasible d with certificate + witness");
  c_exp_maxd->add_option("--witness-d", "verify a full witness at this d");
  CLI::App* c_exp_budget =
      add(c_exp, "budget", "error-term magnitudes at a given triple and Y");
  c_exp_budget->add_option("--d", "range exponent (rational)");
  c_exp_budget->add_option("--b", "box exponent (rational)");
  c_exp_budget->add_option("--tau", "boundary-layer exponent (rational)");
  c_exp_budget->add_option("--y", "gas parameter for the magnitudes");

  CLI::App* c_fock = add(&app, "fock",
                         "truncated-Fock instrument: exact diagonalization "
                         "cross checks at desk scale");
  c_fock->require_subcommand(1);
  auto add_geom = [&](CLI::App* c) {
    c->add_option("--a0", "Born scattering length");
    c->add_option("--r0", "interaction range");
    c->add_option("--ell", "box length");
    c->add_option("--t", "boundary-layer fraction");
    c->add_option("--r-over-r0", "kernel range over interaction range");
    c->add_option("--rho", "background density (< 0: neutral n/ell^3)");
    c->add_option("--axis-max", "per-axis mode index bound");
    c->add_option("--n", "total particle number (fixed sector)");
    c->add_option("--cutoff", "per-mode occupation cutoff");
  };
  CLI::App* c_fock_build =
      add(c_fock, "build", "assemble the box Hamiltonian and diagonalize");
  add_geom(c_fock_build);
  CLI::App* c_fock_quad = add(c_fock, "quadratic-check",
                              "two-mode quadratic-form lower bound vs exact "
                              "diagonalization");
  c_fock_quad->add_option("--A", "diagonal coefficient");
  c_fock_quad->add_option("--B", "pairing coefficient (0 < B <= A)");
  c_fock_quad->add_option("--kappa", "linear coupling magnitude");
  c_fock_quad->add_option("--norm", "commutator norm");
  c_fock_quad->add_option("--cutoff", "per-mode occupation cutoff");
  c_fock_quad->add_option("--tol", "cutoff-convergence tolerance");
  CLI::App* c_fock_loc = add(c_fock, "localize",
                             "calibrate the band-localization constant on "
                             "random banded instances");
  c_fock_loc->add_option("--pilot", "calibration instances");
  c_fock_loc->add_option("--validation", "disjoint validation instances");
  CLI::App* c_fock_sand = add(c_fock, "sandwich",
                              "exact energy between the bound chain and the "
                              "variational upper value");
  add_geom(c_fock_sand);
  c_fock_sand->add_option("--d", "range exponent (rational)");
  c_fock_sand->add_option("--b", "box exponent (rational)");
  c_fock_sand->add_option("--tau", "boundary-layer exponent (rational)");

  CLI::App* c_sweep = add(&app, "sweep",
                          "scalar quantity vs Y with a sqrt(Y) fit block");
  c_sweep->add_option("--quantity",
                      "bogoliubov-integral|upper-bound|lower-bound-i|phi4|"
                      "scattering-a");
  c_sweep->add_option("--y", "Y range lo:hi:n (log-spaced)");
  c_sweep->add_option("--d", "range exponent");
  c_sweep->add_option("--b", "box exponent (lower-bound-i)");
  c_sweep->add_option("--tau", "reported boundary-layer exponent column");
  c_sweep->add_option("--t", "boundary-layer fraction (lower-bound-i)");
  c_sweep->add_option("--a0", "Born scattering length unit");
  c_sweep->add_option("--cprime", "sound-speed safety factor (lower-bound-i)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << "\n" << app.help() << std::flush;
    return 2;
  }

  try {
    json cfg = json::object();
    if (!config_path.empty()) {
      std::ifstream f(config_path);
      if (!f) throw ExitWith{2, "cannot open config file: " + config_path};
      try {
        cfg = json::parse(f);
      } catch (const json::exception& ex) {
        throw ExitWith{2, std::string("config parse error: ") + ex.what()};
      }
      if (!cfg.is_object()) throw ExitWith{2, "config root must be an object"};
      if (app.count("--seed") == 0 && cfg.contains("seed"))
        seed = cfg["seed"].get<std::uint64_t>();
      if (app.count("--format") == 0 && cfg.contains("format")) {
        format = cfg["format"].get<std::string>();
        require(format == "json" || format == "csv",
                "config format must be json|csv");
      }
      if (app.count("--out") == 0 && cfg.contains("out"))
        out_path = cfg["out"].get<std::string>();
    }
    require(format == "json" || app.got_subcommand(c_sweep),
            "--format csv applies to sweep only");

    Report rep;
    if (app.got_subcommand(c_scat)) {
      rep.command = "scattering";
      return run_scattering(c_scat, section(cfg, "scattering"), rep, out_path);
    }
    if (app.got_subcommand(c_ub)) {
      rep.command = "upper-bound";
      return run_upper_bound(c_ub, section(cfg, "upper-bound"), rep, out_path);
    }
    if (app.got_subcommand(c_bog)) {
      rep.command = "bogoliubov-integral";
      return run_bog_integral(c_bog, section(cfg, "bogoliubov-integral"), rep,
                              out_path);
    }
    if (app.got_subcommand(c_lb)) {
      rep.command = "lower-bound-i";
      return run_lower_bound(c_lb, section(cfg, "lower-bound-i"), rep, out_path);
    }
    if (app.got_subcommand(c_kp)) {
      rep.command = "kernel-positivity";
      return run_kernel_positivity(c_kp, section(cfg, "kernel-positivity"), rep,
                                   out_path);
    }
    if (app.got_subcommand(c_ai)) {
      rep.command = "averaging-identity";
      return run_averaging_identity(c_ai, section(cfg, "averaging-identity"),
                                    rep, out_path, seed);
    }
    if (app.got_subcommand(c_exp)) {
      if (c_exp->got_subcommand(c_exp_check)) {
        rep.command = "exponents check";
        return run_exp_check(c_exp_check, section(cfg, "exponents-check"), rep,
                             out_path);
      }
      if (c_exp->got_subcommand(c_exp_maxd)) {
        rep.command = "exponents max-d";
        return run_exp_maxd(c_exp_maxd, section(cfg, "exponents-max-d"), rep,
                            out_path);
      }
      rep.command = "exponents budget";
      return run_exp_budget(c_exp_budget, section(cfg, "exponents-budget"), rep,
                            out_path);
    }
    if (app.got_subcommand(c_fock)) {
      if (c_fock->got_subcommand(c_fock_build)) {
        rep.command = "fock build";
        return run_fock_build(c_fock_build, section(cfg, "fock-build"), rep,
                              out_path);
      }
      if (c_fock->got_subcommand(c_fock_quad)) {
        rep.command = "fock quadratic-check";
        return run_fock_quadratic(c_fock_quad,
                                  section(cfg, "fock-quadratic-check"), rep,
                                  out_path);
      }
      if (c_fock->got_subcommand(c_fock_loc)) {
        rep.command = "fock localize";
        return run_fock_localize(c_fock_loc, section(cfg, "fock-localize"), rep,
                                 out_path, seed);
      }
      rep.command = "fock sandwich";
      return run_fock_sandwich(c_fock_sand, section(cfg, "fock-sandwich"), rep,
                               out_path);
    }
    rep.command = "sweep";
    return run_sweep(c_sweep, section(cfg, "sweep"), rep, out_path, format);
  } catch (const ExitWith& e) {
    std::cerr << e.message << "\n";
    return e.code;
  } catch (const CLI::Error& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  }
}
