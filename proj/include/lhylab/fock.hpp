#pragma once
// Desk-scale operator checks: interaction coefficients in the Neumann cosine
// basis, the truncated second-quantized box Hamiltonian, the two-mode
// quadratic-form inequality, and window localization for band matrices.

#include <array>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "lhylab/common.hpp"
#include "lhylab/exponents.hpp"
#include "lhylab/potentials.hpp"

namespace lhy {

// Neumann-box mode, p = (pi/ell) n with nonnegative integer triple n.
struct Mode {
  std::array<int, 3> n{0, 0, 0};
  int sum2() const { return n[0] * n[0] + n[1] * n[1] + n[2] * n[2]; }
  bool operator==(const Mode& o) const { return n == o.n; }
};

struct ModeSet {
  std::vector<Mode> modes;  // modes[0] is the zero mode
  int axis_max = 0;

  // all triples with each component in [0, axis_max]
  static ModeSet cube(int axis_max);
  // zero mode plus the lowest shells up to count modes, ordered by |n|^2
  static ModeSet shells(int count);
};

struct TruncatedFockSpace {
  ModeSet ms;
  int n_total = 0;
  int per_mode_cutoff = 0;
  std::vector<std::vector<std::uint8_t>> states;  // sorted; index = position

  std::size_t dim() const { return states.size(); }
  std::size_t index_of(const std::vector<std::uint8_t>& occ) const;  // dim() if absent

  static TruncatedFockSpace build(const ModeSet& ms, int n_total, int per_mode_cutoff,
                                  std::size_t dim_cap = 200000);
};

// Interaction coefficients w_hat_{pq,mn} = int d3k/(2pi)^3 Vhat_R(k) T_pm(k)
// conj(T_qn(k)), T_pm(k) = int phi_p phi_m chi(x/ell) e^{ikx} dx. T factorizes
// per axis into cosine-transform combinations of chi1; the k integral is done
// by writing the Lorentzian^2 as a Gaussian average, which makes the three
// axes independent at fixed Gauss parameter. Values are real here (real basis,
// mirror-symmetric chi).
class WAssembler {
 public:
  WAssembler(const LocalizationProfile& lp, double R_over_ell, int axis_max);

  // dimensionless coefficient: w_hat * ell^3
  double coeff(const Mode& p, const Mode& q, const Mode& m, const Mode& n) const;
  // sum over the distinct index orderings (p,q) x (m,n), as used by the
  // symmetrized quartic assembly
  double coeff_ordered_sum(const Mode& p, const Mode& q, const Mode& m,
                           const Mode& n) const;
  double w0000() const;  // zero-mode coefficient, -> 8 pi (R/ell)^3 as t -> 0

  double R_over_ell() const { return R_ell_; }

 private:
  double axis_C(int a, int b, double v) const;  // even-pair axis kernel
  double axis_S(int a, int b, double v) const;  // odd-pair axis kernel
  double G(double w) const;                     // cosine transform of chi1

  double t_ = 0.0, R_ell_ = 0.0;
  int axis_max_ = 0;
  // G table (cubic Hermite on uniform grid)
  double gw_max_ = 0.0, gw_step_ = 0.0;
  std::vector<double> gtab_, gslope_;
  // per-s-node axis integrals, indexed [s][pair(a,b) x pair(c,d)]
  std::vector<double> s_nodes_, s_weights_;
  std::vector<std::vector<double>> axis_table_;
  int npairs_ = 0;
};

// single coefficient through a one-off assembler (tests, spot checks)
double w_hat_coefficient(const Mode& p, const Mode& q, const Mode& m, const Mode& n,
                         const LocalizationProfile& lp, double R, double ell);

// plain 6D Monte-Carlo evaluation of the same coefficient (oracle; slow)
ValErr w_hat_mc(const Mode& p, const Mode& q, const Mode& m, const Mode& n,
                const LocalizationProfile& lp, double R, double ell,
                std::uint64_t seed, std::size_t n_samples);

struct BoxHamiltonian {
  TruncatedFockSpace fs;
  double ell = 0.0;
  double coupling = 0.0;    // gamma a0 R / R0^4
  double rho_ell3 = 0.0;    // background number rho ell^3
  double constant = 0.0;    // (coupling/2) rho^2 ell^6 w_hat_0000
  double w0000 = 0.0;       // dimensionful w_hat_{00,00}
  // sparse symmetric storage: diagonal + strict upper triangle (CSR by row)
  std::vector<double> diag;
  std::vector<std::size_t> row_ptr;
  std::vector<std::uint32_t> col;
  std::vector<double> val;

  std::size_t dim() const { return fs.dim(); }
  void matvec(const double* x, double* y) const;  // y = H x
  std::vector<double> dense() const;              // row-major, small dims only

  // max |H_ij| over pairs with |n_plus(i) - n_plus(j)| = k, k = 0..n_total
  std::vector<double> band_profile() const;
};

BoxHamiltonian build_box_hamiltonian(const TruncatedFockSpace& fs, double rho,
                                     const PotentialParams& p,
                                     const LocalizationProfile& lp, double R,
                                     double ell);

struct GroundState {
  double energy = 0.0;
  std::vector<double> vector;
  int iterations = 0;
  bool converged = false;
};

// dense for small dims, Lanczos with full reorthogonalization above
GroundState ground_state(const BoxHamiltonian& H, double tol = 1e-12);

// minimum eigenvalue restricted to basis states with n_plus <= nplus_max
double restricted_ground(const BoxHamiltonian& H, int nplus_max);

struct QuadraticFormParams {
  double A = 0.0, B = 0.0;          // A >= B > 0
  std::complex<double> kappa{0.0};  // linear coupling
};

struct QuadraticBoundCheck {
  double lhs_min_eig = 0.0;
  double rhs_bound = 0.0;   // -(A - sqrt(A^2-B^2)) norm - 2|kappa|^2/(A+B)
  double slack = 0.0;       // lhs - rhs
  double cutoff_delta = 0.0;  // eigenvalue shift when cutoff -> cutoff - 5
  bool converged = false;
};

// two-mode operator A(b'b + c'c) + B(b'c' + bc) + kappa(b' + c) + conj terms
// with [b, b'] = commutator_norm, on occupation cutoff x cutoff
QuadraticBoundCheck quadratic_bound_check(const QuadraticFormParams& qf,
                                          double commutator_norm, int cutoff,
                                          double tol = 1e-9);

struct BandLocalization {
  std::vector<double> phi;  // window-truncated, renormalized psi
  int window_start = 0;     // 0-based first index of the chosen window
  double value = 0.0;       // (phi, A phi)
  double lambda = 0.0;      // (psi, A psi)
  double correction = 0.0;  // (1/M^2) sum_{k<M} k^2 d_k + sum_{k>=M} d_k
  double bound_rhs = 0.0;   // lambda + C * correction
  bool ok = false;          // value <= bound_rhs
  bool degenerate = false;  // every window had zero mass
  std::vector<double> dk;   // dk[k] = max |A_ij| over |i-j| = k
};

// A: dense Hermitian (real symmetric) row-major N x N
BandLocalization band_localization(const std::vector<double>& A, std::size_t N,
                                   const std::vector<double>& psi, int M,
                                   double C);

struct BandCalibration {
  double pilot_max_ratio = 0.0;
  double validation_max_ratio = 0.0;
  double C_meas = 0.0;     // pilot max with safety head-room factor
  bool stable = false;     // validation max <= C_meas
  int failures = 0;        // validation instances violating the bound at C_meas
};

// random tridiagonal-plus-second-diagonal symmetric instances, random psi,
// M in {5, 10, 20}; ratio = positive part of (value - lambda) / correction
BandCalibration calibrate_band_constant(int n_pilot, int n_validation,
                                        std::uint64_t seed);

struct SandwichRecord {
  double Y = 0.0;
  double exact = 0.0;          // ground energy of the truncated Hamiltonian
  double minus_nI = 0.0;       // -n I from the dropped-terms integral
  double charge_term = 0.0;    // (coupling/2)(n - rho ell^3)^2 w0000
  double desk_term = 0.0;      // C_desk n a0 / ell^3
  double budget_rel = 0.0;     // sum of error-budget magnitudes at this Y
  double lower_chain = 0.0;    // -nI - charge - desk - 4 pi rho a0 n budget_rel
  double upper_variational = 0.0;  // restricted ground over n_plus <= 2
  double cutoff_shift = 0.0;   // exact-energy change under cutoff doubling
  bool ordered = false;        // lower_chain <= exact <= upper + tol
};

// desk-scale constant for the n a0/ell^3 error term of the quadratic
// reduction; measured once per instrument, not derived
double desk_error_constant();

SandwichRecord sandwich_report(const TruncatedFockSpace& fs, double rho,
                               const PotentialParams& p,
                               const LocalizationProfile& lp, double R,
                               double ell, const ExponentTriple& triple);

}  // namespace lhy
