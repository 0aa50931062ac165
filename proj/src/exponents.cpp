#include "lhylab/exponents.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace lhy {

namespace {

std::int64_t checked(__int128 v) {
  if (v > INT64_MAX || v < INT64_MIN) throw std::overflow_error("rational overflow");
  return static_cast<std::int64_t>(v);
}

}  // namespace

Rat::Rat(std::int64_t n, std::int64_t d) {
  if (d == 0) throw std::invalid_argument("zero denominator");
  if (d < 0) { n = -n; d = -d; }
  const std::int64_t g = std::gcd(n < 0 ? -n : n, d);
  num = g ? n / g : n;
  den = g ? d / g : d;
}

Rat Rat::operator+(const Rat& o) const {
  const __int128 n = (__int128)num * o.den + (__int128)o.num * den;
  const __int128 d = (__int128)den * o.den;
  return Rat(checked(n), checked(d));
}

Rat Rat::operator-(const Rat& o) const { return *this + Rat(-o.num, o.den); }

Rat Rat::operator*(const Rat& o) const {
  return Rat(checked((__int128)num * o.num), checked((__int128)den * o.den));
}

Rat Rat::operator/(const Rat& o) const {
  if (o.num == 0) throw std::invalid_argument("division by zero");
  return Rat(checked((__int128)num * o.den), checked((__int128)den * o.num));
}

bool Rat::operator<(const Rat& o) const {
  return (__int128)num * o.den < (__int128)o.num * den;
}

std::string Rat::str() const {
  if (den == 1) return std::to_string(num);
  return std::to_string(num) + "/" + std::to_string(den);
}

namespace {

Rat nu0_of(const ExponentTriple& e) { return Rat(1, 2) - Rat(2) * e.b - Rat(3) * e.d; }
Rat mu0_of(const ExponentTriple& e) { return Rat(1, 2) + Rat(13, 2) * e.b + Rat(3, 2) * e.d; }
Rat alpha1_of(const ExponentTriple& e) { return Rat(3, 4) - Rat(9, 2) * e.b - Rat(6) * e.d; }

void push(std::vector<InequalityCheck>& v, const std::string& label,
          const std::string& system, const Rat& lhs, const Rat& rhs) {
  v.push_back({label, system, lhs, rhs, lhs > rhs});
}

}  // namespace

ExponentReport check_exponents(const ExponentTriple& e) {
  ExponentReport r;
  r.nu0 = nu0_of(e);
  r.mu0 = mu0_of(e);
  r.alpha1 = alpha1_of(e);
  auto& c = r.checks;

  push(c, "d > 0", "positivity", e.d, Rat(0));
  push(c, "b > 0", "positivity", e.b, Rat(0));
  push(c, "tau > 0", "positivity", e.tau, Rat(0));
  push(c, "1/4 > d", "positivity", Rat(1, 4), e.d);

  push(c, "2b - d > tau", "box-localization", Rat(2) * e.b - e.d, e.tau);
  push(c, "tau > d", "box-localization", e.tau, e.d);
  push(c, "1/6 > b + d", "box-localization", Rat(1, 6), e.b + e.d);
  push(c, "b + d > tau", "box-localization", e.b + e.d, e.tau);

  push(c, "2b + d > 6 tau", "kernel-threshold", Rat(2) * e.b + e.d, Rat(6) * e.tau);

  push(c, "alpha1 > 1/2", "final-error-rate", r.alpha1, Rat(1, 2));

  push(c, "2b + d > 6 tau", "summarized", Rat(2) * e.b + e.d, Rat(6) * e.tau);
  push(c, "tau > d", "summarized", e.tau, e.d);
  push(c, "1/6 > 3b + 4d", "summarized", Rat(1, 6), Rat(3) * e.b + Rat(4) * e.d);

  push(c, "nu0 > 0", "depletion-rate", r.nu0, Rat(0));
  push(c, "1/2 > 3b + 3d", "regime", Rat(1, 2), Rat(3) * e.b + Rat(3) * e.d);

  r.all_ok = true;
  bool summarized_ok = true, rest_ok = true;
  for (const auto& chk : c) {
    if (!chk.satisfied) r.all_ok = false;
    const bool in_summary = chk.system == "summarized" || chk.system == "positivity";
    if (in_summary && !chk.satisfied) summarized_ok = false;
    if (!in_summary && !chk.satisfied) rest_ok = false;
  }
  // the summarized system is claimed to imply every other condition
  r.implication_ok = !summarized_ok || rest_ok;
  return r;
}

MaxDResult max_feasible_d(const Rat& witness_d) {
  MaxDResult out;
  out.d0 = Rat(1, 69);
  out.certificate = {
      "take tau -> d+ in {2b + d > 6 tau, tau > d}: 2b + d > 6d, i.e. 2b > 5d",
      "add 2 * (3b + 4d < 1/6): 6b + 8d < 1/3",
      "add 3 * (2b > 5d): 6b > 15d",
      "chain: 15d + 8d < 6b + 8d < 1/3, so 23d < 1/3",
      "d < 1/69",
      "sharpness: the closed system attains d = 1/69 at (d, b, tau) = (1/69, 5/138, 1/69)",
  };

  // witness generator: open intervals b in (5d/2, 1/18 - 4d/3), tau in (d, (2b+d)/6)
  if (witness_d > Rat(0) && witness_d < out.d0) {
    const Rat b = (Rat(5, 2) * witness_d + Rat(1, 18) - Rat(4, 3) * witness_d) / Rat(2);
    const Rat tau = (witness_d + (Rat(2) * b + witness_d) / Rat(6)) / Rat(2);
    out.witness = {witness_d, b, tau};
    out.witness_ok = check_exponents(out.witness).all_ok;
  }

  // cross-check: maximize d over the closed version of the full system by
  // exact vertex enumeration (every 3x3 subsystem of active constraints)
  struct Row { Rat cd, cb, ct, rhs; };  // cd*d + cb*b + ct*tau <= rhs
  const std::vector<Row> rows = {
      {Rat(1), Rat(-2), Rat(1), Rat(0)},        // tau <= 2b - d
      {Rat(1), Rat(0), Rat(-1), Rat(0)},        // d <= tau
      {Rat(1), Rat(1), Rat(0), Rat(1, 6)},      // b + d <= 1/6
      {Rat(-1), Rat(-1), Rat(1), Rat(0)},       // tau <= b + d
      {Rat(-1), Rat(-2), Rat(6), Rat(0)},       // 6 tau <= 2b + d
      {Rat(6), Rat(9, 2), Rat(0), Rat(1, 4)},   // alpha1 >= 1/2
      {Rat(4), Rat(3), Rat(0), Rat(1, 6)},      // 3b + 4d <= 1/6
      {Rat(3), Rat(2), Rat(0), Rat(1, 2)},      // nu0 >= 0
      {Rat(3), Rat(3), Rat(0), Rat(1, 2)},      // 3b + 3d <= 1/2
      {Rat(-1), Rat(0), Rat(0), Rat(0)},        // d >= 0
      {Rat(0), Rat(-1), Rat(0), Rat(0)},        // b >= 0
      {Rat(0), Rat(0), Rat(-1), Rat(0)},        // tau >= 0
  };
  Rat best_d(-1);
  const std::size_t n = rows.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      for (std::size_t k = j + 1; k < n; ++k) {
        const Row &A = rows[i], &B = rows[j], &Cc = rows[k];
        const Rat det = A.cd * (B.cb * Cc.ct - B.ct * Cc.cb) -
                        A.cb * (B.cd * Cc.ct - B.ct * Cc.cd) +
                        A.ct * (B.cd * Cc.cb - B.cb * Cc.cd);
        if (det == Rat(0)) continue;
        // Cramer
        const Rat dd = (A.rhs * (B.cb * Cc.ct - B.ct * Cc.cb) -
                        A.cb * (B.rhs * Cc.ct - B.ct * Cc.rhs) +
                        A.ct * (B.rhs * Cc.cb - B.cb * Cc.rhs)) / det;
        const Rat bb = (A.cd * (B.rhs * Cc.ct - B.ct * Cc.rhs) -
                        A.rhs * (B.cd * Cc.ct - B.ct * Cc.cd) +
                        A.ct * (B.cd * Cc.rhs - B.rhs * Cc.cd)) / det;
        const Rat tt = (A.cd * (B.cb * Cc.rhs - B.rhs * Cc.cb) -
                        A.cb * (B.cd * Cc.rhs - B.rhs * Cc.cd) +
                        A.rhs * (B.cd * Cc.cb - B.cb * Cc.cd)) / det;
        bool feasible = true;
        for (const auto& row : rows)
          if (row.cd * dd + row.cb * bb + row.ct * tt > row.rhs) { feasible = false; break; }
        if (feasible && dd > best_d) best_d = dd;
      }
  out.lp_cross_check = (best_d == out.d0);
  return out;
}

ErrorBudget error_budget(const ExponentTriple& e, double Y) {
  ErrorBudget out;
  out.nu0 = nu0_of(e);
  out.mu0 = mu0_of(e);
  out.alpha1 = alpha1_of(e);

  auto add = [&](const std::string& label, const Rat& expo, const Rat& above) {
    BudgetEntry en;
    en.label = label;
    en.exponent = expo;
    en.required_above = above;
    en.dominated = expo > above;
    en.magnitude = std::pow(Y, expo.to_double());
    out.entries.push_back(en);
  };

  // relative entries: ratio of correction to the leading sqrt(Y) term,
  // dominated means the ratio vanishes (exponent > 0)
  add("sliding correction omega(t) R / (2 ell) vs sqrt(Y)",
      Rat(2) * e.b - e.d - e.tau, Rat(0));
  add("coupling replacement t (a0/R0) vs sqrt(Y)", e.tau - e.d, Rat(0));
  add("a-priori depletion rate nu0", out.nu0, Rat(0));
  add("cutoff remainder |d1|",
      Rat(1, 2) - Rat(7, 2) * e.b - Rat(9, 2) * e.d, Rat(0));
  add("cutoff remainder |d2|", out.nu0, Rat(0));
  // absolute entries: full error exponent, must beat the sqrt(Y) target
  add("localization loss mu0", out.mu0, Rat(1, 2));
  add("final error rate alpha1", out.alpha1, Rat(1, 2));

  out.all_dominated = true;
  for (const auto& en : out.entries)
    if (!en.dominated) out.all_dominated = false;
  return out;
}

}  // namespace lhy
