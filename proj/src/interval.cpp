#include "psp/interval.hpp"

#include <algorithm>
#include <stdexcept>

namespace psp {

Interval::Interval(mpfr_prec_t precision) {
  mpfr_init2(lo_, precision);
  mpfr_init2(hi_, precision);
  mpfr_set_zero(lo_, 1);
  mpfr_set_zero(hi_, 1);
}

Interval::Interval(const Rational& value, mpfr_prec_t precision) : Interval(precision) {
  mpfr_set_q(lo_, value.get_mpq_t(), MPFR_RNDD);
  mpfr_set_q(hi_, value.get_mpq_t(), MPFR_RNDU);
}

Interval::Interval(const Interval& other) : Interval(other.precision()) {
  mpfr_set(lo_, other.lo_, MPFR_RNDD);
  mpfr_set(hi_, other.hi_, MPFR_RNDU);
}

Interval& Interval::operator=(const Interval& other) {
  if (this != &other) {
    mpfr_set_prec(lo_, other.precision());
    mpfr_set_prec(hi_, other.precision());
    mpfr_set(lo_, other.lo_, MPFR_RNDD);
    mpfr_set(hi_, other.hi_, MPFR_RNDU);
  }
  return *this;
}

Interval::~Interval() {
  mpfr_clear(lo_);
  mpfr_clear(hi_);
}

Interval Interval::power(const Rational& base, const Rational& exponent, mpfr_prec_t precision) {
  if (base <= 0) throw std::domain_error("interval power needs a positive base");
  Interval b(base, precision), e(exponent, precision), out(precision);
  // x^y is monotone in each argument for x > 0, so the corners bound it
  bool first = true;
  mpfr_t tmp;
  mpfr_init2(tmp, precision);
  for (auto* x : {&b.lo_, &b.hi_}) {
    for (auto* y : {&e.lo_, &e.hi_}) {
      mpfr_pow(tmp, *x, *y, MPFR_RNDD);
      if (first || mpfr_less_p(tmp, out.lo_)) mpfr_set(out.lo_, tmp, MPFR_RNDD);
      mpfr_pow(tmp, *x, *y, MPFR_RNDU);
      if (first || mpfr_greater_p(tmp, out.hi_)) mpfr_set(out.hi_, tmp, MPFR_RNDU);
      first = false;
    }
  }
  mpfr_clear(tmp);
  return out;
}

Interval operator+(const Interval& a, const Interval& b) {
  Interval out(std::max(a.precision(), b.precision()));
  mpfr_add(out.lo_, a.lo_, b.lo_, MPFR_RNDD);
  mpfr_add(out.hi_, a.hi_, b.hi_, MPFR_RNDU);
  return out;
}

Interval operator-(const Interval& a, const Interval& b) {
  Interval out(std::max(a.precision(), b.precision()));
  mpfr_sub(out.lo_, a.lo_, b.hi_, MPFR_RNDD);
  mpfr_sub(out.hi_, a.hi_, b.lo_, MPFR_RNDU);
  return out;
}

namespace {

// out = [min, max] of op over the four endpoint pairs.
template <typename Op>
void corners(mpfr_t out_lo, mpfr_t out_hi, const mpfr_t a_lo, const mpfr_t a_hi,
             const mpfr_t b_lo, const mpfr_t b_hi, Op op) {
  mpfr_t tmp;
  mpfr_init2(tmp, mpfr_get_prec(out_lo));
  bool first = true;
  for (const auto* x : {a_lo, a_hi}) {
    for (const auto* y : {b_lo, b_hi}) {
      op(tmp, x, y, MPFR_RNDD);
      if (first || mpfr_less_p(tmp, out_lo)) mpfr_set(out_lo, tmp, MPFR_RNDD);
      op(tmp, x, y, MPFR_RNDU);
      if (first || mpfr_greater_p(tmp, out_hi)) mpfr_set(out_hi, tmp, MPFR_RNDU);
      first = false;
    }
  }
  mpfr_clear(tmp);
}

}  // namespace

Interval operator*(const Interval& a, const Interval& b) {
  Interval out(std::max(a.precision(), b.precision()));
  corners(out.lo_, out.hi_, a.lo_, a.hi_, b.lo_, b.hi_,
          [](mpfr_ptr r, mpfr_srcptr x, mpfr_srcptr y, mpfr_rnd_t m) { mpfr_mul(r, x, y, m); });
  return out;
}

Interval operator/(const Interval& a, const Interval& b) {
  if (b.sign() == 0) throw std::domain_error("interval division by an interval containing 0");
  Interval out(std::max(a.precision(), b.precision()));
  corners(out.lo_, out.hi_, a.lo_, a.hi_, b.lo_, b.hi_,
          [](mpfr_ptr r, mpfr_srcptr x, mpfr_srcptr y, mpfr_rnd_t m) { mpfr_div(r, x, y, m); });
  return out;
}

int Interval::sign() const {
  if (mpfr_sgn(lo_) > 0) return 1;
  if (mpfr_sgn(hi_) < 0) return -1;
  return 0;
}

bool Interval::overlaps(const Interval& other) const {
  return mpfr_lessequal_p(lo_, other.hi_) && mpfr_lessequal_p(other.lo_, hi_);
}

Interval Interval::intersect(const Interval& other) const {
  if (!overlaps(other)) throw std::domain_error("disjoint intervals");
  Interval out(std::max(precision(), other.precision()));
  mpfr_max(out.lo_, lo_, other.lo_, MPFR_RNDD);
  mpfr_min(out.hi_, hi_, other.hi_, MPFR_RNDU);
  return out;
}

Rational Interval::lower() const {
  Rational q;
  mpfr_get_q(q.get_mpq_t(), lo_);
  return q;
}

Rational Interval::upper() const {
  Rational q;
  mpfr_get_q(q.get_mpq_t(), hi_);
  return q;
}

namespace {

std::string render(const mpfr_t value, int digits, bool down) {
  char* text = nullptr;
  mpfr_asprintf(&text, down ? "%.*RDe" : "%.*RUe", digits - 1, value);
  std::string out(text);
  mpfr_free_str(text);
  return out;
}

}  // namespace

std::string Interval::lower_decimal(int digits) const { return render(lo_, digits, true); }
std::string Interval::upper_decimal(int digits) const { return render(hi_, digits, false); }

}  // namespace psp
