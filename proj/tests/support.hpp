#pragma once

// Generators and brute-force oracles shared by the unit tests and the
// acceptance run. Nothing here calls the library's own algorithms for the
// quantity being checked; only the data types are shared.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include "psp/assign.hpp"
#include "psp/prefs.hpp"
#include "psp/rational.hpp"

namespace psp::testing {

// Small wrapper so every generator draws from one seeded stream. Draws use
// plain modular reduction on the 64-bit output, which keeps the stream
// identical across standard libraries.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t below(std::uint64_t n) { return engine_() % n; }
  long between(long lo, long hi) { return lo + static_cast<long>(below(hi - lo + 1)); }

  // Fisher-Yates over 0..m-1.
  PreferenceOrder order(std::size_t m) {
    std::vector<std::uint32_t> perm(m);
    std::iota(perm.begin(), perm.end(), 0u);
    for (std::size_t i = m; i > 1; --i) std::swap(perm[i - 1], perm[below(i)]);
    std::vector<ObjectId> ids;
    for (auto p : perm) ids.push_back(ObjectId{p});
    return PreferenceOrder(ids);
  }

  // A lottery on the 1/denominator grid: random composition of `denominator`.
  AssignmentVector lottery(std::size_t m, long denominator) {
    std::vector<long> cuts{0, denominator};
    for (std::size_t i = 0; i + 1 < m; ++i) cuts.push_back(between(0, denominator));
    std::sort(cuts.begin(), cuts.end());
    AssignmentVector x;
    for (std::size_t i = 0; i < m; ++i) x.push_back(fraction(cuts[i + 1] - cuts[i], denominator));
    return x;
  }

  // k / denominator with k in [lo, hi].
  Rational grid(long lo, long hi, long denominator) {
    return fraction(between(lo, hi), denominator);
  }

 private:
  std::mt19937_64 engine_;
};

// All m! rankings via std::next_permutation, independent of the library's
// enumeration.
inline std::vector<std::vector<std::uint32_t>> permutations(std::size_t m) {
  std::vector<std::uint32_t> p(m);
  std::iota(p.begin(), p.end(), 0u);
  std::vector<std::vector<std::uint32_t>> out;
  do out.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  return out;
}

inline PreferenceOrder order_from(const std::vector<std::uint32_t>& ranking) {
  std::vector<ObjectId> ids;
  for (auto r : ranking) ids.push_back(ObjectId{r});
  return PreferenceOrder(ids);
}

// Number of discordant pairs.
inline std::size_t kendall_tau(const PreferenceOrder& p, const PreferenceOrder& q) {
  std::size_t count = 0;
  for (std::uint32_t a = 0; a < p.size(); ++a) {
    for (std::uint32_t b = a + 1; b < p.size(); ++b) {
      if (p.prefers(ObjectId{a}, ObjectId{b}) != q.prefers(ObjectId{a}, ObjectId{b})) ++count;
    }
  }
  return count;
}

// Upper-contour sums straight from the definition: for every object j,
// sum over objects ranked at or above j.
inline bool sd_oracle(const PreferenceOrder& order, const AssignmentVector& x,
                      const AssignmentVector& y) {
  for (std::uint32_t j = 0; j < x.size(); ++j) {
    Rational sx, sy;
    for (std::uint32_t k = 0; k < x.size(); ++k) {
      if (k == j || order.prefers(ObjectId{k}, ObjectId{j})) {
        sx += x[k];
        sy += y[k];
      }
    }
    if (sx < sy) return false;
  }
  return true;
}

inline bool ld_oracle(const PreferenceOrder& order, const AssignmentVector& x,
                      const AssignmentVector& y) {
  for (std::size_t k = 0; k < order.size(); ++k) {
    const auto j = order[k].index;
    if (x[j] != y[j]) return x[j] > y[j];
  }
  return true;
}

// Delta_k(r) = sum_{l<=k} r^l (x - y)_{j_l}, computed term by term.
inline Rational delta_oracle(const PreferenceOrder& order, const AssignmentVector& x,
                             const AssignmentVector& y, const Rational& r, std::size_t k) {
  Rational sum, power = 1;
  for (std::size_t l = 0; l < k; ++l) {
    power *= r;
    sum += power * (x[order[l].index] - y[order[l].index]);
  }
  return sum;
}

inline bool discounted_oracle(const PreferenceOrder& order, const AssignmentVector& x,
                              const AssignmentVector& y, const Rational& r) {
  for (std::size_t k = 1; k < order.size(); ++k) {
    if (delta_oracle(order, x, y, r, k) < 0) return false;
  }
  return true;
}

inline Rational eu_oracle(const std::vector<Rational>& u, const AssignmentVector& x) {
  Rational sum;
  for (std::size_t j = 0; j < u.size(); ++j) sum += u[j] * x[j];
  return sum;
}

// Every lottery over m objects on the 1/denominator grid.
inline std::vector<AssignmentVector> grid_lotteries(std::size_t m, long denominator) {
  std::vector<AssignmentVector> out;
  std::vector<long> counts(m, 0);
  auto rec = [&](auto&& self, std::size_t i, long left) -> void {
    if (i + 1 == m) {
      counts[i] = left;
      AssignmentVector x;
      for (long c : counts) x.push_back(fraction(c, denominator));
      out.push_back(std::move(x));
      return;
    }
    for (long c = 0; c <= left; ++c) {
      counts[i] = c;
      self(self, i + 1, left - c);
    }
  };
  rec(rec, 0, denominator);
  return out;
}

// Serial dictatorship averaged over all n! priority orders, written from
// scratch: agents in priority order take their best object with capacity.
inline AssignmentMatrix rsd_oracle(const Setting& setting, const PreferenceProfile& profile) {
  std::vector<std::size_t> priority(setting.n);
  std::iota(priority.begin(), priority.end(), 0u);
  std::vector<std::vector<long>> counts(setting.n, std::vector<long>(setting.m, 0));
  long orders = 0;
  do {
    std::vector<long> left(setting.q.begin(), setting.q.end());
    for (auto agent : priority) {
      for (std::size_t k = 0; k < setting.m; ++k) {
        const auto j = profile[agent][k].index;
        if (left[j] > 0) {
          --left[j];
          ++counts[agent][j];
          break;
        }
      }
    }
    ++orders;
  } while (std::next_permutation(priority.begin(), priority.end()));
  AssignmentMatrix x(setting.n, AssignmentVector(setting.m));
  for (std::size_t i = 0; i < setting.n; ++i) {
    for (std::size_t j = 0; j < setting.m; ++j) x[i][j] = fraction(counts[i][j], orders);
  }
  return x;
}

// phi's lottery for a report, from the six patterns written out directly.
// Objects a, b, c, d are 0..3.
inline AssignmentVector phi_row_oracle(const Rational& s, const Rational& alpha,
                                       const std::vector<std::uint32_t>& report) {
  const Rational beta = s * alpha, k = s * (s + 1) - 1;
  const Rational gc = (1 - alpha) / ((s - 1) * k), gd = s * (s + 1) * (1 - alpha) / k;
  switch (report[0]) {
    case 0: return {alpha, 0, 0, 1 - alpha};
    case 1: return {0, beta, 0, 1 - beta};
    case 3: return {0, 0, 0, 1};
    default: break;
  }
  if (report[1] == 3) return {0, 0, gc, 1 - gc};
  if (report == std::vector<std::uint32_t>{2, 0, 3, 1}) return {1 - gc - gd, 0, gc, gd};
  return {1 - gc - gd, gd, gc, 0};
}

// The exact alpha-set where every local constraint of phi holds at r = 1/s,
// intersected with feasibility. Each adjusted sum is affine in alpha, so its
// coefficients come from alpha = 0 and alpha = 1. Empty is lower > upper.
inline std::pair<Rational, Rational> phi_local_interval_oracle(const Rational& s) {
  Rational lo = s / (s * s * s - s + 1), hi = 1 / s;
  for (const auto& truth : permutations(4)) {
    for (std::size_t k = 0; k < 3; ++k) {
      auto lie = truth;
      std::swap(lie[k], lie[k + 1]);
      for (std::size_t depth = 1; depth <= 3; ++depth) {
        auto adjusted = [&](const Rational& alpha) {
          auto x = phi_row_oracle(s, alpha, truth), y = phi_row_oracle(s, alpha, lie);
          Rational acc;
          for (std::size_t l = 0; l < depth; ++l) acc = acc * s + x[truth[l]] - y[truth[l]];
          return acc;
        };
        const Rational c0 = adjusted(0), c1 = adjusted(1) - c0;
        if (c1 > 0) lo = max(lo, Rational(-c0 / c1));
        else if (c1 < 0) hi = min(hi, Rational(-c0 / c1));
        else if (c0 < 0) return {1, 0};
      }
    }
  }
  return {lo, hi};
}

// u in the interior of URBI(r^2) consistent with `order`: top 1, bottom 0,
// consecutive ratios r^2 * k/1000 with k < 1000.
inline UtilityFunction interior_start(Gen& gen, const PreferenceOrder& order, const Rational& r) {
  UtilityFunction u{std::vector<Rational>(order.size())};
  Rational v = 1;
  for (std::size_t k = 0; k + 1 < order.size(); ++k) {
    u.values[order[k].index] = v;
    v *= r * r * gen.grid(1, 999, 1000);
  }
  u.values[order[order.size() - 1].index] = 0;
  return u;
}

}  // namespace psp::testing
