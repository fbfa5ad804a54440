#pragma once

// The four-object, single-agent mechanism phi(s, alpha) that is (1/s)-locally
// partially strategyproof but fails partial strategyproofness well above
// (1/s)^2, together with the search for a witness at a given epsilon.
//
// Objects a, b, c, d are ids 0..3. With beta = s alpha and
//   gamma_c = (1 - alpha) / ((s - 1)(s(s + 1) - 1)),
//   gamma_d = s(s + 1)(1 - alpha) / (s(s + 1) - 1),
// the report determines the lottery:
//   a > ...                       (alpha, 0, 0, 1 - alpha)
//   b > ...                       (0, beta, 0, 1 - beta)
//   d > ...                       (0, 0, 0, 1)
//   c > d > ...                   (0, 0, gamma_c, 1 - gamma_c)
//   c > a > d > b                 (1 - gamma_c - gamma_d, 0, gamma_c, gamma_d)
//   c > b > ...,  c > a > b > d   (1 - gamma_c - gamma_d, gamma_d, gamma_c, 0)

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "psp/analysis.hpp"
#include "psp/assign.hpp"
#include "psp/interval.hpp"

namespace psp {

struct PhiParams {
  Rational s;
  Rational alpha;

  /// Throws std::domain_error unless s > 1.
  PhiParams(Rational s, Rational alpha);

  Rational beta() const { return s * alpha; }
  Rational gamma_c() const;
  Rational gamma_d() const;
};

struct RationalInterval {
  Rational lower;
  Rational upper;

  bool empty() const { return lower > upper; }
  bool contains(const Rational& x) const { return lower <= x && x <= upper; }
  bool contains(const RationalInterval& other) const {
    return other.empty() || (lower <= other.lower && other.upper <= upper);
  }
  Rational midpoint() const { return (lower + upper) / 2; }
  std::string to_string() const;

  friend bool operator==(const RationalInterval&, const RationalInterval&) = default;
};

/// The lottery assigned to each of the 24 orders (indexed as in
/// all_preference_orders(4)), without feasibility checks. Entries are affine
/// in alpha for fixed s.
std::vector<AssignmentVector> phi_rows(const PhiParams& p);

/// Throws ValidationError (quoting the feasible alpha range) for infeasible
/// parameters.
TabulatedMechanism build_phi(const PhiParams& p);

/// [s / (s^3 - s + 1), 1/s]. Throws std::domain_error for s <= 1.
RationalInterval feasibility_interval(const Rational& s);

struct CaseBound {
  std::string source;  // "feasibility", "VI lower", ...
  bool is_lower = false;
  Rational value;
};

struct LocalInterval {
  RationalInterval interval;  // intersection of every bound below
  std::vector<CaseBound> bounds;
  RationalInterval claim7;    // the closed-form I_s
  /// Case VI's upper bound is the binding upper bound and Case VI's lower
  /// bound dominates the feasibility lower bound.
  bool claim7_applies = false;
};

/// Throws std::domain_error for s <= 1 and CrossCheckFailure if the
/// intersection differs from I_s where the ordering of bounds says it must not.
LocalInterval local_psp_interval(const Rational& s);

struct DerivedInterval {
  RationalInterval interval;
  std::string lower_source;  // "feasibility" or the binding manipulation
  std::string upper_source;
};

/// The exact set of alpha for which every local manipulation satisfies
/// delta_k >= 0, k = 1..3, at r = 1/s, intersected with feasibility. Each
/// delta_k is affine in alpha, so it is read off the rows at alpha = 0 and 1.
DerivedInterval derived_local_interval(const Rational& s);

struct CaseCheck {
  std::string label;      // "IV a>c>b>d -> c>a>b>d"
  std::string quantity;   // "delta_3" or "SD"
  std::optional<Rational> closed_form;
  Rational machinery;     // adjusted partial sum from the tabulated rows
  bool sign_agrees = true;
  bool exact_agrees = true;
};

struct LocalPspReport {
  bool local_psp = false;   // check_r_psp(build_phi, 1/s, local)
  std::optional<Manipulation> witness;
  std::vector<CaseCheck> cases;
};

/// Exhaustive local check plus every closed-form case expression. Throws
/// CrossCheckFailure when a closed form and the machinery disagree on
/// whether the constraint holds.
LocalPspReport verify_local_psp(const PhiParams& p);

/// The adjusted partial sum delta_k of x - y along `order` at discount 1/s_tilde.
Interval adjusted_delta(const PreferenceOrder& order, const AssignmentVector& x,
                        const AssignmentVector& y, std::size_t k, const Interval& s_tilde);

struct Delta3Evidence {
  Interval direct;
  Interval closed_form;
  int sign = 0;  // of the intersection; 0 means indeterminate at this precision
  mpfr_prec_t precision = 0;
  /// Exact value when s^{2 - epsilon} is rational (2 - epsilon integral).
  std::optional<Rational> exact;

  Delta3Evidence(Interval direct, Interval closed_form);
};

/// delta_3 for truth a>b>c>d and misreport c>a>b>d at s_tilde = s^{2 - epsilon},
/// both from the tabulated rows and from the closed form
/// (1 - alpha)(-s^{5-e} + s^{5-2e} + s^{3-e} - 1) / (s^3 - 2s + 1).
/// Throws CrossCheckFailure if the two enclosures are disjoint.
Delta3Evidence nonlocal_delta3(const Rational& s, const Rational& alpha, const Rational& epsilon,
                               mpfr_prec_t precision = 128);

struct WitnessCertificate {
  Rational epsilon;
  Rational s;
  Rational alpha;
  RationalInterval local_interval;
  std::size_t scanned = 0;  // s values tried
  bool local_check = false;
  std::optional<Manipulation> local_witness;
  std::optional<Delta3Evidence> delta3;
  Rational r_tilde;         // rational discount at or below s^{-(2-epsilon)}
  UtilityFunction violating_utility;
  Rational gain;            // misreport minus truthful expected utility
  DegreeValue r_global = DegreeValue::exact(0);
  bool r_global_bounds = false;  // r^2 <= r_global < r^{2 - epsilon}
  bool complete = false;

  nlohmann::json to_json() const;
};

/// Integer s = 2, 3, ... with s' = max(s + 1, ceil(5s/4)); alpha is the
/// midpoint of derived_local_interval(s). Throws
/// std::domain_error unless 0 < epsilon < 2 and BudgetExhausted past s_max.
WitnessCertificate find_witness(const Rational& epsilon, const Rational& s_max = Rational(1000000));

/// The next s on the witness schedule.
Rational next_witness_s(const Rational& s);

}  // namespace psp
