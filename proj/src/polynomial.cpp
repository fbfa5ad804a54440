#include "psp/polynomial.hpp"

#include <stdexcept>

namespace psp {

Polynomial::Polynomial(std::vector<Rational> coefficients) : coeffs_(std::move(coefficients)) {
  trim();
}

void Polynomial::trim() {
  while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

Rational Polynomial::operator()(const Rational& x) const {
  Rational acc(0);
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

int Polynomial::sign_right_of_zero() const {
  for (const auto& c : coeffs_) {
    if (c != 0) return sgn(c);
  }
  return 0;
}

Polynomial Polynomial::derivative() const {
  if (coeffs_.size() < 2) return Polynomial();
  std::vector<Rational> d(coeffs_.size() - 1);
  for (std::size_t k = 1; k < coeffs_.size(); ++k) {
    d[k - 1] = coeffs_[k] * static_cast<unsigned long>(k);
  }
  return Polynomial(std::move(d));
}

Polynomial operator-(const Polynomial& p) {
  auto c = p.coeffs_;
  for (auto& v : c) v = -v;
  return Polynomial(std::move(c));
}

Polynomial operator-(const Polynomial& a, const Polynomial& b) {
  std::vector<Rational> c(std::max(a.coeffs_.size(), b.coeffs_.size()), Rational(0));
  for (std::size_t k = 0; k < a.coeffs_.size(); ++k) c[k] += a.coeffs_[k];
  for (std::size_t k = 0; k < b.coeffs_.size(); ++k) c[k] -= b.coeffs_[k];
  return Polynomial(std::move(c));
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  if (a.is_zero() || b.is_zero()) return Polynomial();
  std::vector<Rational> c(a.coeffs_.size() + b.coeffs_.size() - 1, Rational(0));
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
    for (std::size_t j = 0; j < b.coeffs_.size(); ++j) c[i + j] += a.coeffs_[i] * b.coeffs_[j];
  }
  return Polynomial(std::move(c));
}

void Polynomial::divide(const Polynomial& dividend, const Polynomial& divisor,
                        Polynomial& quotient, Polynomial& remainder) {
  if (divisor.is_zero()) throw std::domain_error("polynomial division by zero");
  std::vector<Rational> rem = dividend.coeffs_;
  const int dd = divisor.degree();
  std::vector<Rational> quot(std::max(0, dividend.degree() - dd + 1), Rational(0));
  for (int k = dividend.degree(); k >= dd; --k) {
    Rational factor = rem[k] / divisor.coeffs_[dd];
    quot[k - dd] = factor;
    if (factor == 0) continue;
    for (int l = 0; l <= dd; ++l) rem[k - dd + l] -= factor * divisor.coeffs_[l];
  }
  if (dd >= 0 && static_cast<int>(rem.size()) > dd) rem.resize(dd);
  quotient = Polynomial(std::move(quot));
  remainder = Polynomial(std::move(rem));
}

Polynomial Polynomial::gcd(Polynomial a, Polynomial b) {
  while (!b.is_zero()) {
    Polynomial q, r;
    divide(a, b, q, r);
    a = std::move(b);
    b = std::move(r);
  }
  if (a.is_zero()) return a;
  // monic
  Rational lead = a.coeffs_.back();
  for (auto& c : a.coeffs_) c /= lead;
  return a;
}

Polynomial Polynomial::squarefree() const {
  if (degree() < 1) return *this;
  Polynomial g = gcd(*this, derivative());
  if (g.degree() < 1) return *this;
  Polynomial q, r;
  divide(*this, g, q, r);
  return q;
}

SturmSequence::SturmSequence(const Polynomial& squarefree) {
  if (squarefree.is_zero()) return;
  chain_.push_back(squarefree);
  chain_.push_back(squarefree.derivative());
  while (!chain_.back().is_zero()) {
    Polynomial q, r;
    Polynomial::divide(chain_[chain_.size() - 2], chain_.back(), q, r);
    chain_.push_back(-r);
  }
  chain_.pop_back();
}

int SturmSequence::variations(const Rational& x) const {
  int count = 0;
  int last = 0;
  for (const auto& p : chain_) {
    int s = p.sign_at(x);
    if (s == 0) continue;
    if (last != 0 && s != last) ++count;
    last = s;
  }
  return count;
}

std::size_t SturmSequence::count(const Rational& a, const Rational& b) const {
  if (chain_.empty()) return 0;
  int diff = variations(a) - variations(b);
  return diff > 0 ? static_cast<std::size_t>(diff) : 0;
}

}  // namespace psp
