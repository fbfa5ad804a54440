#pragma once

// Dense univariate polynomials over the rationals with Sturm-sequence root
// counting. Small degrees only (the dominance kernels never exceed m - 2).

#include <vector>

#include "psp/rational.hpp"

namespace psp {

class Polynomial {
 public:
  Polynomial() = default;
  /// coefficients[k] multiplies x^k; trailing zeros are trimmed.
  explicit Polynomial(std::vector<Rational> coefficients);

  /// -1 for the zero polynomial.
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.empty(); }
  const std::vector<Rational>& coefficients() const { return coeffs_; }
  const Rational& operator[](std::size_t k) const { return coeffs_[k]; }

  Rational operator()(const Rational& x) const;
  int sign_at(const Rational& x) const { return sgn((*this)(x)); }

  /// Sign of p on (0, eps) for small eps > 0: sign of the lowest nonzero
  /// coefficient. 0 for the zero polynomial.
  int sign_right_of_zero() const;

  Polynomial derivative() const;

  friend Polynomial operator-(const Polynomial& p);
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);

  /// Euclidean division; `divisor` must be nonzero.
  static void divide(const Polynomial& dividend, const Polynomial& divisor, Polynomial& quotient,
                     Polynomial& remainder);
  static Polynomial gcd(Polynomial a, Polynomial b);

  /// Same distinct roots, all simple.
  Polynomial squarefree() const;

 private:
  void trim();
  std::vector<Rational> coeffs_;
};

/// Sturm chain of a squarefree polynomial. count(a, b) is the number of
/// distinct real roots in the half-open interval (a, b].
class SturmSequence {
 public:
  explicit SturmSequence(const Polynomial& squarefree);
  std::size_t count(const Rational& a, const Rational& b) const;

 private:
  int variations(const Rational& x) const;
  std::vector<Polynomial> chain_;
};

}  // namespace psp
