#include "psp/dominance.hpp"

#include <sstream>
#include <stdexcept>

#include "psp/polynomial.hpp"

namespace psp {
namespace {

void check_sizes(const PreferenceOrder& order, const AssignmentVector& x,
                 const AssignmentVector& y) {
  if (x.size() != order.size() || y.size() != order.size()) {
    throw std::invalid_argument("dominance: vectors and order have different universes");
  }
}

void check_discount(const Rational& r) {
  if (r <= 0 || r > 1) {
    throw std::domain_error("discount r = " + to_string(r) + " outside (0, 1]");
  }
}

// Differences x - y listed along the order, top first.
std::vector<Rational> ranked_differences(const PreferenceOrder& order, const AssignmentVector& x,
                                         const AssignmentVector& y) {
  std::vector<Rational> d(order.size());
  for (std::size_t k = 0; k < order.size(); ++k) {
    auto j = order[k].index;
    d[k] = x[j] - y[j];
  }
  return d;
}

// Simplest fraction (smallest denominator) in the closed interval [lo, hi],
// 0 <= lo <= hi, by continued-fraction descent.
Rational simplest_between(Rational lo, Rational hi) {
  Integer fl;
  mpz_fdiv_q(fl.get_mpz_t(), lo.get_num_mpz_t(), lo.get_den_mpz_t());
  if (Rational(fl) == lo) return lo;
  if (Rational(fl + 1) <= hi) return Rational(fl + 1);
  Rational lo_frac = lo - fl, hi_frac = hi - fl;
  // both in (0, 1): recurse on reciprocals, which swaps the ends
  Rational inner = simplest_between(1 / hi_frac, 1 / lo_frac);
  return Rational(fl) + 1 / inner;
}

// sup { rho in (0, 1] : q >= 0 on (0, rho] } for q(r) = Delta_k(r) / r.
DegreeValue constraint_degree(const Polynomial& q, const Rational& tolerance) {
  if (q.is_zero()) return DegreeValue::exact(1);
  if (q.sign_right_of_zero() < 0) return DegreeValue::exact(0);
  if (q.degree() == 0) return DegreeValue::exact(1);
  if (q.degree() == 1) {
    if (q[1] >= 0) return DegreeValue::exact(1);
    Rational root = -q[0] / q[1];
    return DegreeValue::exact(root >= 1 ? Rational(1) : root);
  }

  const Polynomial p = q.squarefree();
  const SturmSequence sturm(p);
  Rational lo(0);
  const Rational one(1);
  while (true) {
    if (sturm.count(lo, one) == 0) return DegreeValue::exact(1);
    Rational a = lo, b = one;
    while (sturm.count(a, b) > 1) {
      Rational mid = (a + b) / 2;
      if (sturm.count(a, mid) >= 1) {
        b = mid;
      } else {
        a = mid;
      }
    }
    if (p.sign_at(b) == 0) {
      // rational root at b; look just to its right
      if (b == one) return DegreeValue::exact(1);
      Rational c = one;
      while (sturm.count(b, c) > 0) c = (b + c) / 2;
      if (q.sign_at(c) < 0) return DegreeValue::exact(b);
      lo = b;
      continue;
    }
    if (q.sign_at(b) > 0) {
      lo = b;  // even-multiplicity touch inside (a, b)
      continue;
    }
    // q turns negative at the unique root inside (a, b)
    if (q.degree() == 2) {
      Rational disc = q[1] * q[1] - 4 * q[0] * q[2];
      Rational sq;
      if (rational_sqrt(disc, sq)) {
        const Rational lo_root = (-q[1] - sq) / (2 * q[2]), hi_root = (-q[1] + sq) / (2 * q[2]);
        for (const Rational& root : {lo_root, hi_root}) {
          if (root > a && root < b) return DegreeValue::exact(root);
        }
      }
    }
    while (b - a > tolerance) {
      Rational mid = (a + b) / 2;
      int s = p.sign_at(mid);
      if (s == 0) return DegreeValue::exact(mid);
      if (s == p.sign_at(b)) {
        b = mid;
      } else {
        a = mid;
      }
    }
    Rational candidate = simplest_between(a, b);
    if (p.sign_at(candidate) == 0) return DegreeValue::exact(candidate);
    return DegreeValue{a, b};
  }
}

}  // namespace

bool sd_dominates(const PreferenceOrder& order, const AssignmentVector& x,
                  const AssignmentVector& y) {
  check_sizes(order, x, y);
  Rational prefix(0);
  for (std::size_t k = 0; k + 1 < order.size(); ++k) {
    auto j = order[k].index;
    prefix += x[j] - y[j];
    if (prefix < 0) return false;
  }
  return true;
}

bool ld_dominates(const PreferenceOrder& order, const AssignmentVector& x,
                  const AssignmentVector& y) {
  check_sizes(order, x, y);
  for (std::size_t k = 0; k < order.size(); ++k) {
    auto j = order[k].index;
    if (x[j] != y[j]) return x[j] > y[j];
  }
  return true;
}

DeltaVector::DeltaVector(Rational r, std::vector<Rational> normalized)
    : r_(std::move(r)), normalized_(std::move(normalized)) {}

Rational DeltaVector::adjusted(std::size_t k) const { return normalized(k) / pow(r_, k); }

bool DeltaVector::nonnegative() const {
  for (std::size_t k = 0; k + 1 < normalized_.size(); ++k) {
    if (normalized_[k] < 0) return false;
  }
  return true;
}

std::string DeltaVector::to_string() const {
  std::ostringstream os;
  os << "[";
  for (std::size_t k = 0; k < normalized_.size(); ++k) {
    if (k) os << ", ";
    os << psp::to_string(normalized_[k]);
  }
  os << "] at r = " << psp::to_string(r_);
  return os.str();
}

DeltaVector delta_partial_sums(const PreferenceOrder& order, const AssignmentVector& x,
                               const AssignmentVector& y, const Rational& r) {
  check_sizes(order, x, y);
  check_discount(r);
  auto d = ranked_differences(order, x, y);
  std::vector<Rational> sums(d.size());
  Rational weight = r;
  Rational acc(0);
  for (std::size_t k = 0; k < d.size(); ++k) {
    acc += weight * d[k];
    sums[k] = acc;
    weight *= r;
  }
  return DeltaVector(r, std::move(sums));
}

bool r_discounted_dominates(const PreferenceOrder& order, const AssignmentVector& x,
                            const AssignmentVector& y, const Rational& r) {
  return delta_partial_sums(order, x, y, r).nonnegative();
}

std::string DegreeValue::to_string() const {
  if (is_exact()) return psp::to_string(lower);
  return "[" + to_decimal(lower, 12) + ", " + to_decimal(upper, 12) + "]";
}

DegreeValue min(const DegreeValue& a, const DegreeValue& b) {
  return {psp::min(a.lower, b.lower), psp::min(a.upper, b.upper)};
}

Rational default_degree_tolerance() { return Rational(1, 1000000000); }

DegreeValue max_dominance_degree(const PreferenceOrder& order, const AssignmentVector& x,
                                 const AssignmentVector& y) {
  return max_dominance_degree(order, x, y, default_degree_tolerance());
}

DegreeValue max_dominance_degree(const PreferenceOrder& order, const AssignmentVector& x,
                                 const AssignmentVector& y, const Rational& tolerance) {
  check_sizes(order, x, y);
  auto d = ranked_differences(order, x, y);
  DegreeValue best = DegreeValue::exact(1);
  std::vector<Rational> coeffs;
  for (std::size_t k = 0; k + 1 < d.size(); ++k) {
    coeffs.push_back(d[k]);
    best = min(best, constraint_degree(Polynomial(coeffs), tolerance));
    if (best.upper == 0) break;
  }
  return best;
}

}  // namespace psp
