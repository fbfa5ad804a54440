#pragma once

// Closed real intervals with MPFR endpoints and outward rounding. Used only
// where irrational powers s^e appear; everything else stays exact.

#include <mpfr.h>

#include <string>

#include "psp/rational.hpp"

namespace psp {

class Interval {
 public:
  explicit Interval(mpfr_prec_t precision);
  Interval(const Rational& value, mpfr_prec_t precision);
  Interval(const Interval& other);
  Interval& operator=(const Interval& other);
  ~Interval();

  /// Encloses base^exponent for base > 0. Throws std::domain_error otherwise.
  static Interval power(const Rational& base, const Rational& exponent, mpfr_prec_t precision);

  mpfr_prec_t precision() const { return mpfr_get_prec(lo_); }

  friend Interval operator+(const Interval& a, const Interval& b);
  friend Interval operator-(const Interval& a, const Interval& b);
  friend Interval operator*(const Interval& a, const Interval& b);
  /// Throws std::domain_error if b contains 0.
  friend Interval operator/(const Interval& a, const Interval& b);

  /// -1 or +1 when the interval excludes 0, 0 otherwise.
  int sign() const;
  bool overlaps(const Interval& other) const;
  Interval intersect(const Interval& other) const;

  /// Endpoints as exact rationals (MPFR values are dyadic).
  Rational lower() const;
  Rational upper() const;

  /// Scientific notation with `digits` significant digits, rounded outward.
  std::string lower_decimal(int digits) const;
  std::string upper_decimal(int digits) const;

 private:
  mpfr_t lo_;
  mpfr_t hi_;
};

}  // namespace psp
