#include <cmath>
#include <numeric>
#include <vector>

#include "doctest.h"
#include "lhylab/bogoliubov.hpp"
#include "lhylab/common.hpp"
#include "lhylab/exponents.hpp"
#include "lhylab/fock.hpp"
#include "lhylab/parallel.hpp"
#include "lhylab/potentials.hpp"

using namespace lhy;

namespace {
int total(const std::vector<std::uint8_t>& occ) {
  return std::accumulate(occ.begin(), occ.end(), 0);
}
}  // namespace

TEST_CASE("basis enumeration counts and index round trip") {
  const ModeSet ms = ModeSet::cube(1);
  CHECK(ms.modes.size() == 8);
  const TruncatedFockSpace fs = TruncatedFockSpace::build(ms, 2, 2);
  // fixed total N = 2 over 8 modes: C(9,7) = 36 occupation vectors
  CHECK(fs.dim() == 36);
  for (std::size_t i = 0; i < fs.dim(); ++i) {
    CHECK(fs.index_of(fs.states[i]) == i);
    CHECK(total(fs.states[i]) == 2);
  }
  CHECK_THROWS(TruncatedFockSpace::build(ms, 8, 8, 10));  // cap enforced
}

TEST_CASE("zero-mode coefficient approaches the delta-interaction value") {
  // for a thin ramp and R << ell, w0000 * ell^3 -> 8 pi (R/ell)^3 (int chi1^2)^3
  const LocalizationProfile lp = localization_profiles(0.02);
  const double R_ell = 0.01;
  const WAssembler wa(lp, R_ell, 0);
  const double expected =
      8.0 * PI * R_ell * R_ell * R_ell * std::pow(lp.norm_chi2, 3);
  CHECK(wa.w0000() == doctest::Approx(expected).epsilon(0.01));
}

TEST_CASE("factorized coefficient matches the Monte-Carlo oracle") {
  const LocalizationProfile lp = localization_profiles(0.1);
  const double R = 0.06, ell = 1.0;
  const Mode zero{{0, 0, 0}}, e1{{1, 0, 0}}, e2{{0, 1, 0}};
  struct Case {
    Mode p, q, m, n;
  };
  const Case cases[] = {{zero, zero, zero, zero},
                        {e1, zero, e1, zero},
                        {e1, e2, e1, e2},
                        {e1, zero, zero, e1}};
  for (const auto& c : cases) {
    const double fast = w_hat_coefficient(c.p, c.q, c.m, c.n, lp, R, ell);
    const ValErr mc = w_hat_mc(c.p, c.q, c.m, c.n, lp, R, ell, 0x9e3779b9ull,
                               400000);
    CHECK(std::abs(fast - mc.value) < 4.0 * mc.err + 1e-12);
  }
}

TEST_CASE("parity selection rule zeroes odd-sum couplings") {
  const LocalizationProfile lp = localization_profiles(0.1);
  const double R = 0.06, ell = 1.0;
  const Mode zero{{0, 0, 0}}, e1{{1, 0, 0}};
  // p + m odd on the first axis while q + n even: coefficient vanishes
  CHECK(w_hat_coefficient(e1, zero, zero, zero, lp, R, ell) == 0.0);
}

TEST_CASE("assembled operator is exactly symmetric and number conserving") {
  const LocalizationProfile lp = localization_profiles(0.1);
  const PotentialParams p{0.02, 0.08};
  const TruncatedFockSpace fs = TruncatedFockSpace::build(ModeSet::cube(1), 3, 3);
  const BoxHamiltonian H = build_box_hamiltonian(fs, 3.0, p, lp, 0.06, 1.0);

  const auto dense = H.dense();
  const std::size_t N = H.dim();
  double asym = 0.0;
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j)
      asym = std::max(asym, std::abs(dense[i * N + j] - dense[j * N + i]));
  CHECK(asym == 0.0);

  // off-diagonal entries only between equal particle totals
  for (std::size_t r = 0; r < N; ++r)
    for (std::size_t idx = H.row_ptr[r]; idx < H.row_ptr[r + 1]; ++idx)
      CHECK(total(fs.states[r]) == total(fs.states[H.col[idx]]));

  // matvec agrees with the dense product
  std::vector<double> x(N), y(N);
  for (std::size_t i = 0; i < N; ++i) x[i] = std::sin(0.7 * i + 0.3);
  H.matvec(x.data(), y.data());
  for (std::size_t i = 0; i < N; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < N; ++j) acc += dense[i * N + j] * x[j];
    CHECK(std::abs(acc - y[i]) < 1e-12 * (1.0 + std::abs(acc)));
  }
}

TEST_CASE("excitation-count band is exactly two-wide") {
  const LocalizationProfile lp = localization_profiles(0.1);
  const PotentialParams p{0.02, 0.08};
  const TruncatedFockSpace fs = TruncatedFockSpace::build(ModeSet::cube(1), 4, 4);
  const BoxHamiltonian H = build_box_hamiltonian(fs, 4.0, p, lp, 0.06, 1.0);
  const auto dk = H.band_profile();
  REQUIRE(dk.size() >= 4);
  CHECK(dk[0] > 0.0);
  for (std::size_t k = 3; k < dk.size(); ++k) CHECK(dk[k] == 0.0);
}

TEST_CASE("zero coupling gives the zero operator") {
  const LocalizationProfile lp = localization_profiles(0.1);
  const PotentialParams p{0.0, 0.08};
  const TruncatedFockSpace fs = TruncatedFockSpace::build(ModeSet::cube(1), 3, 3);
  const BoxHamiltonian H = build_box_hamiltonian(fs, 3.0, p, lp, 0.06, 1.0);
  CHECK(H.coupling == 0.0);
  const GroundState gs = ground_state(H);
  CHECK(gs.converged);
  CHECK(gs.energy == 0.0);
}

TEST_CASE("restricted minimum decreases toward the full ground value") {
  const LocalizationProfile lp = localization_profiles(0.1);
  const PotentialParams p{0.02, 0.08};
  const TruncatedFockSpace fs = TruncatedFockSpace::build(ModeSet::cube(1), 4, 4);
  const BoxHamiltonian H = build_box_hamiltonian(fs, 4.0, p, lp, 0.06, 1.0);
  const GroundState gs = ground_state(H);
  CHECK(gs.converged);
  const double r0 = restricted_ground(H, 0);
  const double r2 = restricted_ground(H, 2);
  const double rall = restricted_ground(H, 4);
  CHECK(r2 <= r0 + 1e-14);
  CHECK(rall <= r2 + 1e-14);
  CHECK(rall == doctest::Approx(gs.energy).epsilon(1e-10));
  CHECK(gs.energy <= r2 + 1e-12);
}

TEST_CASE("occupation cutoff beyond the particle total is inert") {
  const LocalizationProfile lp = localization_profiles(0.1);
  const PotentialParams p{0.02, 0.08};
  const ModeSet ms = ModeSet::cube(1);
  const TruncatedFockSpace f3 = TruncatedFockSpace::build(ms, 3, 3);
  const TruncatedFockSpace f6 = TruncatedFockSpace::build(ms, 3, 6);
  REQUIRE(f3.dim() == f6.dim());
  const double e3 =
      ground_state(build_box_hamiltonian(f3, 3.0, p, lp, 0.06, 1.0)).energy;
  const double e6 =
      ground_state(build_box_hamiltonian(f6, 3.0, p, lp, 0.06, 1.0)).energy;
  CHECK(std::abs(e6 - e3) < 1e-6 * std::abs(e6));
}

TEST_CASE("two-mode quadratic bound: equality cases and positivity") {
  // kappa = 0: exact ground is -(A - sqrt(A^2 - B^2))
  QuadraticFormParams qf;
  qf.A = 2.0;
  qf.B = 1.0;
  const QuadraticBoundCheck q0 = quadratic_bound_check(qf, 1.0, 60);
  CHECK(q0.converged);
  CHECK(q0.rhs_bound == doctest::Approx(std::sqrt(3.0) - 2.0).epsilon(1e-14));
  CHECK(q0.slack >= -1e-12);
  CHECK(std::abs(q0.slack) < 1e-8);

  // linear coupling shifts by -2 kappa^2/(A+B); still saturated
  qf.kappa = 0.5;
  const QuadraticBoundCheck q1 = quadratic_bound_check(qf, 1.0, 60);
  CHECK(q1.rhs_bound ==
        doctest::Approx(std::sqrt(3.0) - 2.0 - 0.5 / 3.0).epsilon(1e-13));
  CHECK(q1.slack >= -1e-12);
  CHECK(std::abs(q1.slack) < 1e-6);

  // commutator norm scales the pairing part of the bound
  qf.kappa = 0.0;
  const QuadraticBoundCheck q2 = quadratic_bound_check(qf, 2.0, 60);
  CHECK(q2.rhs_bound ==
        doctest::Approx(2.0 * (std::sqrt(3.0) - 2.0)).epsilon(1e-13));
  CHECK(q2.slack >= -1e-11);

  // weak pairing limit: energy comes from the displacement alone
  qf.A = 3.0;
  qf.B = 1e-6;
  qf.kappa = 1.0;
  const QuadraticBoundCheck q3 = quadratic_bound_check(qf, 1.0, 60);
  CHECK(q3.rhs_bound == doctest::Approx(-2.0 / (3.0 + 1e-6)).epsilon(1e-9));
  CHECK(q3.slack >= -1e-12);
  CHECK(std::abs(q3.slack) < 1e-6);

  CHECK_THROWS(quadratic_bound_check({1.0, 2.0, {0.0, 0.0}}, 1.0, 60));
  CHECK_THROWS(quadratic_bound_check({2.0, 1.0, {0.0, 0.0}}, 1.0, 4));
}

TEST_CASE("window truncation: diagonal case is exact with zero correction") {
  const std::size_t N = 30;
  std::vector<double> A(N * N, 0.0);
  for (std::size_t i = 0; i < N; ++i) A[i * N + i] = 0.3 * double(i) - 1.0;
  std::vector<double> psi(N, 0.0);
  psi[0] = 1.0;  // ground eigenvector of the diagonal matrix
  const BandLocalization bl = band_localization(A, N, psi, 5, 1.0);
  CHECK(bl.correction == 0.0);
  CHECK(bl.value == doctest::Approx(bl.lambda).epsilon(1e-14));
  CHECK(bl.ok);
  for (std::size_t k = 1; k < bl.dk.size(); ++k) CHECK(bl.dk[k] == 0.0);
}

TEST_CASE("window spanning everything reproduces the input state") {
  const std::size_t N = 12;
  std::vector<double> A(N * N, 0.0);
  for (std::size_t i = 0; i < N; ++i) {
    A[i * N + i] = std::cos(1.1 * i);
    if (i + 1 < N) A[i * N + i + 1] = A[(i + 1) * N + i] = 0.2;
  }
  std::vector<double> psi(N);
  double s = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    psi[i] = 1.0 + 0.1 * i;
    s += psi[i] * psi[i];
  }
  for (auto& v : psi) v /= std::sqrt(s);
  const BandLocalization bl =
      band_localization(A, N, psi, static_cast<int>(N), 1.0);
  CHECK(bl.value == doctest::Approx(bl.lambda).epsilon(1e-12));
  CHECK(bl.ok);
}

TEST_CASE("calibration produces head-room over the pilot set") {
  const BandCalibration cal = calibrate_band_constant(40, 40, 7);
  CHECK(cal.C_meas > 0.0);
  CHECK(cal.C_meas >= cal.pilot_max_ratio);
  CHECK(cal.pilot_max_ratio >= 0.0);
}

TEST_CASE("parallel and serial drivers produce identical bits") {
  const int n = 16;
  std::vector<double> eps(n), a(n), b(n);
  for (int i = 0; i < n; ++i) eps[i] = 0.01 * (i + 1);
  par::for_each_index(n, [&](std::size_t i) { a[i] = phi4_of_eps(eps[i]).value; });
  par::for_each_index_serial(
      n, [&](std::size_t i) { b[i] = phi4_of_eps(eps[i]).value; });
  for (int i = 0; i < n; ++i) CHECK(a[i] == b[i]);
}

TEST_CASE("sandwich record fields are finite and self-consistent") {
  const LocalizationProfile lp = localization_profiles(0.1);
  const PotentialParams p{0.02, 0.08};
  const TruncatedFockSpace fs = TruncatedFockSpace::build(ModeSet::cube(1), 4, 4);
  const ExponentTriple e{Rat(1, 100), Rat(7, 200), Rat(3, 250)};
  const SandwichRecord rec = sandwich_report(fs, 4.0, p, lp, 0.06, 1.0, e);
  CHECK(std::isfinite(rec.exact));
  CHECK(std::isfinite(rec.lower_chain));
  CHECK(std::isfinite(rec.upper_variational));
  CHECK(rec.lower_chain <= rec.minus_nI);
  CHECK(rec.exact <= rec.upper_variational + 1e-12);
  CHECK(rec.Y == doctest::Approx(4.0 * std::pow(p.a0, 3)).epsilon(1e-13));
}
