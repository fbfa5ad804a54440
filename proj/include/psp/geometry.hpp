#pragma once

// Utility functions as points, URBI(r) membership, and the straight path
// u_alpha = (1 - alpha) u + alpha v between two utility functions.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "psp/assign.hpp"
#include "psp/prefs.hpp"
#include "psp/rational.hpp"

namespace psp {

/// u strictly decreases along the order.
bool consistent(const UtilityFunction& u, const PreferenceOrder& order);

/// For all a, b with u(a) > u(b): r (u(a) - min u) >= u(b) - min u.
bool urbi_satisfies(const UtilityFunction& u, const Rational& r);

/// Least r with urbi_satisfies(u, r). Throws std::domain_error for constant u.
Rational urbi_min_bound(const UtilityFunction& u);

/// u(j_k) = r^{k-1} for k < m and u(j_m) = 0. Requires 0 < r < 1.
UtilityFunction geometric_utility(const PreferenceOrder& order, const Rational& r);

/// v(j) = C^{m - rank(j)} under `target`. Requires C > 1.
UtilityFunction construct_target_utility(const PreferenceOrder& target, const Rational& base);

/// The convex path co(u, v).
class LineSegment {
 public:
  /// Throws std::invalid_argument if the endpoints have different sizes.
  LineSegment(UtilityFunction start, UtilityFunction end);

  const UtilityFunction& start() const { return u_; }
  const UtilityFunction& end() const { return v_; }
  std::size_t objects() const { return u_.size(); }

  UtilityFunction at(const Rational& alpha) const;
  Rational value(ObjectId j, const Rational& alpha) const;

  /// Candidate breakpoints of alpha -> min_j u_alpha(j) on [0, 1]: 0, 1 and
  /// every pairwise crossing inside. The envelope is affine between neighbours.
  std::vector<Rational> envelope_breakpoints() const;
  Rational envelope(const Rational& alpha) const;

 private:
  UtilityFunction u_;
  UtilityFunction v_;
};

/// The alpha where u_alpha(a) = u_alpha(b), for u(a) > u(b) and v(a) < v(b).
/// Throws NoSolutionError otherwise.
Rational transition_time(const LineSegment& seg, ObjectId a, ObjectId b);

/// The alpha with u_alpha(b) / u_alpha(a) = s. Requires u_alpha(a) > 0 on
/// [0, 1] (so the ratio is monotone) and a solution in [0, 1]; throws
/// NoSolutionError otherwise.
Rational ratio_crossing_time(const LineSegment& seg, ObjectId a, ObjectId b, const Rational& s);

/// inf and sup of the alphas at which the URBI(r) constraint between a and b
/// is violated, with the minimum utility tracked exactly along the path.
struct ViolationWindow {
  bool empty = true;
  Rational lower;  // inf of the violation set
  Rational upper;  // sup of the violation set
};

ViolationWindow violation_times(const LineSegment& seg, ObjectId a, ObjectId b,
                                const Rational& r);

/// Orders met by u_alpha as alpha sweeps 0 -> 1.
struct PassedSequence {
  std::vector<PreferenceOrder> orders;
  /// alpha of each transition; size orders.size() - 1 unless simultaneous.
  std::vector<Rational> times;
  /// Two transitions at the same alpha (includes three-way indifference).
  bool simultaneous = false;
};

/// Requires both endpoints to be strict (consistent with some order); throws
/// std::invalid_argument otherwise.
PassedSequence passed_sequence(const LineSegment& seg);

/// The order a strict utility function is consistent with.
PreferenceOrder induced_order(const UtilityFunction& u);

/// Pairwise transition-time conditions under which the path induces the
/// bubble-sort transition from `truth` to `target`.
bool check_canonical_conditions(const LineSegment& seg, const PreferenceOrder& truth,
                                const PreferenceOrder& target);

/// For two inverted pairs swapping at t1 < t2, the violation window of the
/// first ends no later than the second's begins. An empty window counts as
/// the single point of its transition time.
bool check_window_separation(const LineSegment& seg, const PreferenceOrder& truth,
                             const PreferenceOrder& target, const Rational& r);

struct PassageCertificate {
  std::vector<PreferenceOrder> orders;
  std::vector<Rational> witnesses;
  bool simultaneous = false;
  bool complete = false;
  /// Index of the first order without a witness when incomplete.
  std::optional<std::size_t> failed_at;

  nlohmann::json to_json(std::span<const std::string> names) const;
};

/// For every order the path passes, an alpha at which u_alpha is consistent
/// with it and lies in URBI(r). Witnesses are the earliest admissible point
/// when the admissible set has a closed left end, otherwise a midpoint.
PassageCertificate urbi_passage_witness(const LineSegment& seg, const Rational& r);

/// Adaptive choice of the target base C: start at 2m and double until the
/// canonical conditions and window separation hold, or `max_doublings` is hit.
struct TargetChoice {
  Rational base;
  UtilityFunction target;
  bool canonical = false;
  bool separated = false;
  std::size_t doublings = 0;
};

TargetChoice choose_target_utility(const UtilityFunction& start, const PreferenceOrder& truth,
                                   const PreferenceOrder& target, const Rational& r,
                                   std::size_t max_doublings = 64);

}  // namespace psp
