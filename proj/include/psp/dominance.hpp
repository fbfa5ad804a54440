#pragma once

// Comparing two lotteries at a preference order: stochastic dominance,
// lexicographic dominance and r-discounted dominance.
//
// For P = j_1 > ... > j_m and d = x - y, the discounted partial sums are
//
//     Delta_k(r) = sum_{l=1..k} r^l * d_{j_l},      k = 1..m.
//
// x r-discounted-dominates y at P iff Delta_k(r) >= 0 for k = 1..m-1. The
// adjusted form used in hand calculations, delta_k = r^{-k} Delta_k(r)
// = sum_{l<=k} s^{k-l} d_{j_l} with s = 1/r, has the same signs.

#include <string>
#include <vector>

#include "psp/assign.hpp"
#include "psp/prefs.hpp"
#include "psp/rational.hpp"

namespace psp {

bool sd_dominates(const PreferenceOrder& order, const AssignmentVector& x,
                  const AssignmentVector& y);

bool ld_dominates(const PreferenceOrder& order, const AssignmentVector& x,
                  const AssignmentVector& y);

/// Discounted partial sums of x - y along an order at a fixed discount.
class DeltaVector {
 public:
  DeltaVector(Rational r, std::vector<Rational> normalized);

  const Rational& discount() const { return r_; }
  std::size_t size() const { return normalized_.size(); }

  /// Delta_k for k = 1..m.
  const Rational& normalized(std::size_t k) const { return normalized_.at(k - 1); }
  const std::vector<Rational>& normalized() const { return normalized_; }

  /// delta_k = r^{-k} Delta_k.
  Rational adjusted(std::size_t k) const;

  /// True iff Delta_k >= 0 for k = 1..m-1.
  bool nonnegative() const;

  /// "[Delta_1, ..., Delta_m] at r = ..." rendering for reports.
  std::string to_string() const;

 private:
  Rational r_;
  std::vector<Rational> normalized_;
};

/// Throws std::domain_error unless 0 < r <= 1.
DeltaVector delta_partial_sums(const PreferenceOrder& order, const AssignmentVector& x,
                               const AssignmentVector& y, const Rational& r);

bool r_discounted_dominates(const PreferenceOrder& order, const AssignmentVector& x,
                            const AssignmentVector& y, const Rational& r);

/// Largest admissible discount, either exact or bracketed.
///
/// When inexact, discounted dominance holds on (0, lower] and fails somewhere
/// in (upper, upper + eps) for every eps > 0, with upper - lower <= tolerance.
struct DegreeValue {
  Rational lower;
  Rational upper;

  static DegreeValue exact(Rational value) { return {value, value}; }
  bool is_exact() const { return lower == upper; }
  Rational width() const { return upper - lower; }
  std::string to_string() const;

  friend bool operator==(const DegreeValue&, const DegreeValue&) = default;
};

/// min over brackets: [min lower, min upper].
DegreeValue min(const DegreeValue& a, const DegreeValue& b);

/// Bisection width used for irrational binding roots.
Rational default_degree_tolerance();

/// sup { r in (0,1] : x r-discounted-dominates y at P for every r' in (0,r] }.
/// 0 when no positive discount works (exactly when lexicographic dominance
/// fails for x != y); 1 when stochastic dominance holds.
DegreeValue max_dominance_degree(const PreferenceOrder& order, const AssignmentVector& x,
                                 const AssignmentVector& y);
DegreeValue max_dominance_degree(const PreferenceOrder& order, const AssignmentVector& x,
                                 const AssignmentVector& y, const Rational& tolerance);

}  // namespace psp
