#pragma once

// Exact rational arithmetic used throughout the library.
//
// All probabilities, utilities and discount factors are mpq_class values.
// Parsing never goes through binary floating point: decimal strings such as
// "0.125" are converted digit by digit into 125/1000 = 1/8.

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace psp {

using Rational = mpq_class;
using Integer = mpz_class;

/// Parses "p/q", "k", "-k" or a plain decimal like "0.05" into an exact
/// rational. Throws ParseError on anything else, including q == 0.
Rational parse_rational(std::string_view text);

/// Like parse_rational, but additionally requires "p/q" to be written in
/// lowest terms with a positive denominator (the mechanism-file contract).
Rational parse_canonical_rational(std::string_view text);

/// Canonical text form: "p/q" in lowest terms, or "k" for integers.
std::string to_string(const Rational& value);

/// Decimal rendering with the given number of significant fractional digits.
/// Presentation only; never parsed back.
std::string to_decimal(const Rational& value, int digits = 12);

/// p/q in lowest terms. mpq_class(p, q) alone does not canonicalize, and
/// GMP's comparisons assume canonical operands.
Rational fraction(long numerator, long denominator);

Rational pow(const Rational& base, unsigned exponent);

Rational min(const Rational& a, const Rational& b);
Rational max(const Rational& a, const Rational& b);

/// True when q is the square of a rational; writes the root into `root`.
bool rational_sqrt(const Rational& q, Rational& root);

}  // namespace psp
