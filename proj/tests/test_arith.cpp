#include <doctest.h>

#include "psp/errors.hpp"
#include "psp/interval.hpp"
#include "psp/polynomial.hpp"
#include "psp/rational.hpp"
#include "support.hpp"

using namespace psp;

TEST_CASE("parse_rational is exact for fractions and decimals") {
  CHECK(parse_rational("1/10") == Rational(1) / 10);
  CHECK(parse_rational("2/4") == Rational(1) / 2);
  CHECK(parse_rational("-3") == -3);
  CHECK(parse_rational("0.05") == Rational(1) / 20);
  CHECK(parse_rational(".5") == Rational(1) / 2);
  CHECK(parse_rational("-1.25") == Rational(-5) / 4);
  // 0.1 has no finite binary expansion; a double round trip would not give 1/10
  CHECK(to_string(parse_rational("0.1")) == "1/10");
  CHECK_THROWS_AS(parse_rational("1/0"), ParseError);
  CHECK_THROWS_AS(parse_rational("1e-3"), ParseError);
  CHECK_THROWS_AS(parse_rational(""), ParseError);
  CHECK_THROWS_AS(parse_rational("1/-3"), ParseError);
  CHECK_THROWS_AS(parse_rational("."), ParseError);
}

TEST_CASE("canonical parsing wants lowest terms") {
  CHECK(parse_canonical_rational("1/3") * 3 == 1);
  CHECK(parse_canonical_rational("7") == 7);
  CHECK_THROWS_AS(parse_canonical_rational("2/6"), ParseError);
  CHECK_THROWS_AS(parse_canonical_rational("0.5"), ParseError);
}

TEST_CASE("fraction canonicalizes so that comparisons work") {
  Rational a = fraction(500, 1000), b = fraction(1, 2);
  CHECK(a == b);
  CHECK(a.get_den() == 2);
  CHECK(fraction(-2, -4) == b);
  CHECK_THROWS_AS(fraction(1, 0), std::domain_error);
}

TEST_CASE("to_decimal rounds half away from zero") {
  CHECK(to_decimal(Rational(1) / 3, 4) == "0.3333");
  CHECK(to_decimal(Rational(2) / 3, 4) == "0.6667");
  CHECK(to_decimal(Rational(-1) / 8, 2) == "-0.13");
  CHECK(to_decimal(Rational(3), 5) == "3");
}

TEST_CASE("rational_sqrt recognises squares only") {
  Rational root;
  CHECK(rational_sqrt(Rational(9) / 49, root));
  CHECK(root == Rational(3) / 7);
  CHECK_FALSE(rational_sqrt(Rational(2), root));
  CHECK_FALSE(rational_sqrt(Rational(-4), root));
}

TEST_CASE("interval power encloses the true value") {
  // 2^(1/2) squared must straddle 2
  auto root2 = Interval::power(2, Rational(1) / 2, 128);
  auto sq = root2 * root2;
  CHECK(sq.lower() <= 2);
  CHECK(sq.upper() >= 2);
  CHECK(sq.upper() - sq.lower() < Rational(1) / Rational(Integer(1) << 100));
  // integral exponent: exact enclosure of 10^3
  auto thousand = Interval::power(10, 3, 64);
  CHECK(thousand.lower() == 1000);
  CHECK(thousand.upper() == 1000);
}

TEST_CASE("interval arithmetic keeps directed enclosures") {
  testing::Gen gen(11);
  for (int i = 0; i < 200; ++i) {
    Rational a = gen.grid(-1000, 1000, 37), b = gen.grid(1, 1000, 41);
    Interval ia(a, 53), ib(b, 53);
    auto check = [](const Interval& iv, const Rational& exact) {
      CHECK(iv.lower() <= exact);
      CHECK(exact <= iv.upper());
    };
    check(ia + ib, a + b);
    check(ia - ib, a - b);
    check(ia * ib, a * b);
    check(ia / ib, a / b);
  }
  CHECK_THROWS_AS(Interval(1, 64) / (Interval(1, 64) - Interval(1, 64)), std::domain_error);
}

TEST_CASE("interval sign and intersection") {
  Interval neg(Rational(-1) / 3, 64), pos(Rational(1) / 3, 64);
  CHECK(neg.sign() == -1);
  CHECK(pos.sign() == 1);
  CHECK((pos - pos).sign() == 0);
  CHECK_FALSE(neg.overlaps(pos));
  CHECK_THROWS_AS(neg.intersect(pos), std::domain_error);
  auto both = pos.intersect(Interval(Rational(1) / 3, 256));
  CHECK(both.lower() <= Rational(1) / 3);
}

TEST_CASE("polynomial evaluation, division and gcd") {
  // (x - 1)(x - 1/3) = x^2 - 4/3 x + 1/3
  Polynomial p({Rational(1) / 3, Rational(-4) / 3, 1});
  CHECK(p(1) == 0);
  CHECK(p(Rational(1) / 3) == 0);
  CHECK(p.degree() == 2);
  Polynomial q, rem;
  Polynomial::divide(p, Polynomial({-1, 1}), q, rem);
  CHECK(rem.is_zero());
  CHECK(q(0) == Rational(-1) / 3);
  // squarefree part of (x - 1)^2 (x + 2) has roots 1 and -2 only
  Polynomial cube = Polynomial({-1, 1}) * Polynomial({-1, 1}) * Polynomial({2, 1});
  auto sf = cube.squarefree();
  CHECK(sf.degree() == 2);
  CHECK(sf(1) == 0);
  CHECK(sf(-2) == 0);
}

TEST_CASE("sturm counts roots in half-open intervals") {
  Polynomial p({Rational(1) / 3, Rational(-4) / 3, 1});
  SturmSequence sturm(p.squarefree());
  CHECK(sturm.count(0, 1) == 2);
  CHECK(sturm.count(Rational(1) / 3, 1) == 1);
  CHECK(sturm.count(0, Rational(1) / 4) == 0);
  // x^2 - 2 has one root in (1, 2]
  SturmSequence irr(Polynomial({-2, 0, 1}));
  CHECK(irr.count(1, 2) == 1);
  CHECK(irr.count(-2, 2) == 2);
}

TEST_CASE("sign just right of zero is the lowest coefficient's sign") {
  CHECK(Polynomial({0, -1, 5}).sign_right_of_zero() == -1);
  CHECK(Polynomial({0, 0, 3}).sign_right_of_zero() == 1);
  CHECK(Polynomial().sign_right_of_zero() == 0);
}
