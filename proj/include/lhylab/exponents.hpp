#pragma once
// Exact-arithmetic treatment of the scaling-exponent system.
//
// Scalings: a0/R0 ~ Y^(1/2-d), a0/ell ~ Y^(b+1/2), t ~ Y^tau. Feasibility of
// a triple is a conjunction of strict linear inequalities; everything here is
// decided in integer rationals, no floating point.

#include <cstdint>
#include <string>
#include <vector>

namespace lhy {

// Small exact rational on int64 with gcd normalization. Inputs in this
// module are tiny (denominators well under 1e6), far from overflow.
struct Rat {
  std::int64_t num = 0;
  std::int64_t den = 1;

  Rat() = default;
  Rat(std::int64_t n) : num(n), den(1) {}
  Rat(std::int64_t n, std::int64_t d);

  Rat operator+(const Rat& o) const;
  Rat operator-(const Rat& o) const;
  Rat operator*(const Rat& o) const;
  Rat operator/(const Rat& o) const;
  bool operator<(const Rat& o) const;
  bool operator>(const Rat& o) const { return o < *this; }
  bool operator==(const Rat& o) const { return num == o.num && den == o.den; }
  bool operator<=(const Rat& o) const { return !(o < *this); }
  bool operator>=(const Rat& o) const { return !(*this < o); }

  double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }
  std::string str() const;
};

struct ExponentTriple {
  Rat d, b, tau;
};

struct InequalityCheck {
  std::string label;   // e.g. "2b - d > tau"
  std::string system;  // which inequality family it belongs to
  Rat lhs, rhs;        // evaluated sides (lhs OP rhs with OP = strict >)
  bool satisfied = false;
};

struct ExponentReport {
  std::vector<InequalityCheck> checks;
  bool all_ok = false;
  // the summarized system implies the box-localization system; any
  // counterexample to that implication found at this triple is flagged
  bool implication_ok = true;
  Rat nu0, mu0, alpha1;
};

ExponentReport check_exponents(const ExponentTriple& e);

struct MaxDResult {
  Rat d0;                          // 1/69
  std::vector<std::string> certificate;  // the eliminating combination, step by step
  ExponentTriple witness;          // interior point for d = witness.d < d0
  bool witness_ok = false;         // witness passes check_exponents
  bool lp_cross_check = false;     // vertex enumeration agrees with d0
};

// sup{d : exists b, tau > 0 with the summarized system strict}, by exact
// elimination, cross-checked by rational vertex enumeration of the closed
// polytope. witness_d: any rational below d0 for which a witness is wanted.
MaxDResult max_feasible_d(const Rat& witness_d = Rat(1, 100));

struct BudgetEntry {
  std::string label;
  Rat exponent;        // power of Y
  bool dominated;      // beats the comparison threshold (see required_above)
  Rat required_above;  // 0 for relative-comparison entries, 1/2 for mu0/alpha1
  double magnitude;    // Y^exponent at the queried Y
};

struct ErrorBudget {
  Rat nu0, mu0, alpha1;
  std::vector<BudgetEntry> entries;
  bool all_dominated = false;
};

ErrorBudget error_budget(const ExponentTriple& e, double Y);

}  // namespace lhy
