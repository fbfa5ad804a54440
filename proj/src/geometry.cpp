#include "psp/geometry.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "psp/errors.hpp"

namespace psp {

bool consistent(const UtilityFunction& u, const PreferenceOrder& order) {
  if (u.size() != order.size()) return false;
  for (std::size_t k = 0; k + 1 < order.size(); ++k) {
    if (!(u(order[k]) > u(order[k + 1]))) return false;
  }
  return true;
}

bool urbi_satisfies(const UtilityFunction& u, const Rational& r) {
  const Rational low = u.min_value();
  for (std::size_t a = 0; a < u.size(); ++a) {
    for (std::size_t b = 0; b < u.size(); ++b) {
      if (u.values[a] > u.values[b] && r * (u.values[a] - low) < u.values[b] - low) return false;
    }
  }
  return true;
}

Rational urbi_min_bound(const UtilityFunction& u) {
  const Rational low = u.min_value();
  bool any = false;
  Rational bound(0);
  for (std::size_t a = 0; a < u.size(); ++a) {
    for (std::size_t b = 0; b < u.size(); ++b) {
      if (u.values[a] > u.values[b]) {
        any = true;
        bound = max(bound, (u.values[b] - low) / (u.values[a] - low));
      }
    }
  }
  if (!any) throw std::domain_error("urbi_min_bound: utility function is constant");
  return bound;
}

UtilityFunction geometric_utility(const PreferenceOrder& order, const Rational& r) {
  if (r <= 0 || r >= 1) {
    throw std::domain_error("geometric_utility needs 0 < r < 1, got " + to_string(r));
  }
  UtilityFunction u{std::vector<Rational>(order.size(), Rational(0))};
  Rational value(1);
  for (std::size_t k = 0; k + 1 < order.size(); ++k) {
    u.values[order[k].index] = value;
    value *= r;
  }
  return u;
}

UtilityFunction construct_target_utility(const PreferenceOrder& target, const Rational& base) {
  if (base <= 1) {
    throw std::domain_error("target utility base must exceed 1, got " + to_string(base));
  }
  const auto m = target.size();
  UtilityFunction v{std::vector<Rational>(m)};
  for (std::size_t k = 0; k < m; ++k) {
    v.values[target[k].index] = pow(base, static_cast<unsigned>(m - 1 - k));
  }
  return v;
}

// --- LineSegment -------------------------------------------------------------

LineSegment::LineSegment(UtilityFunction start, UtilityFunction end)
    : u_(std::move(start)), v_(std::move(end)) {
  if (u_.size() != v_.size()) throw std::invalid_argument("segment endpoints differ in size");
}

Rational LineSegment::value(ObjectId j, const Rational& alpha) const {
  return (1 - alpha) * u_(j) + alpha * v_(j);
}

UtilityFunction LineSegment::at(const Rational& alpha) const {
  UtilityFunction w{std::vector<Rational>(objects())};
  for (std::size_t j = 0; j < objects(); ++j) {
    w.values[j] = value(ObjectId{static_cast<std::uint32_t>(j)}, alpha);
  }
  return w;
}

Rational LineSegment::envelope(const Rational& alpha) const { return at(alpha).min_value(); }

std::vector<Rational> LineSegment::envelope_breakpoints() const {
  std::vector<Rational> points{Rational(0), Rational(1)};
  const auto m = objects();
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t k = j + 1; k < m; ++k) {
      Rational du = u_.values[j] - u_.values[k];
      Rational dv = v_.values[j] - v_.values[k];
      if (du == dv) continue;  // parallel lines
      Rational alpha = du / (du - dv);
      if (alpha > 0 && alpha < 1) points.push_back(alpha);
    }
  }
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  return points;
}

namespace {

ObjectId obj(std::size_t j) { return ObjectId{static_cast<std::uint32_t>(j)}; }

// Sub-interval of [lo, hi] with open/closed ends.
struct Span {
  Rational lo, hi;
  bool lo_closed = true, hi_closed = true;
  bool empty = false;

  bool valid() const { return !empty && (lo < hi || (lo == hi && lo_closed && hi_closed)); }
};

Span intersect(const Span& a, const Span& b) {
  if (!a.valid() || !b.valid()) return Span{0, 0, true, true, true};
  Span out;
  if (a.lo > b.lo) {
    out.lo = a.lo;
    out.lo_closed = a.lo_closed;
  } else if (b.lo > a.lo) {
    out.lo = b.lo;
    out.lo_closed = b.lo_closed;
  } else {
    out.lo = a.lo;
    out.lo_closed = a.lo_closed && b.lo_closed;
  }
  if (a.hi < b.hi) {
    out.hi = a.hi;
    out.hi_closed = a.hi_closed;
  } else if (b.hi < a.hi) {
    out.hi = b.hi;
    out.hi_closed = b.hi_closed;
  } else {
    out.hi = a.hi;
    out.hi_closed = a.hi_closed && b.hi_closed;
  }
  out.empty = !out.valid();
  return out;
}

// { alpha in [p, q] : h(alpha) > 0 } (strict) or >= 0 ... for a linear h given
// by its endpoint values.
Span linear_region(const Rational& p, const Rational& q, const Rational& hp, const Rational& hq,
                   bool strict) {
  auto inside = [strict](const Rational& h) { return strict ? h > 0 : h >= 0; };
  const bool in_p = inside(hp), in_q = inside(hq);
  if (in_p && in_q) return Span{p, q, true, true, false};
  if (!in_p && !in_q) {
    // a linear function with both ends outside stays outside
    return Span{p, p, false, false, true};
  }
  Rational root = p + (q - p) * hp / (hp - hq);
  if (in_p) return Span{p, root, true, !strict, false};
  return Span{root, q, !strict, true, false};
}

}  // namespace

Rational transition_time(const LineSegment& seg, ObjectId a, ObjectId b) {
  const auto& u = seg.start();
  const auto& v = seg.end();
  if (!(u(a) > u(b)) || !(v(a) < v(b))) {
    throw NoSolutionError("objects do not swap along the segment");
  }
  return (u(a) - u(b)) / (u(a) - u(b) + v(b) - v(a));
}

Rational ratio_crossing_time(const LineSegment& seg, ObjectId a, ObjectId b, const Rational& s) {
  const auto& u = seg.start();
  const auto& v = seg.end();
  if (!(u(a) > 0) || !(v(a) > 0)) {
    throw NoSolutionError("ratio path undefined: u_alpha(a) vanishes on the segment");
  }
  Rational numerator = s * u(a) - u(b);
  Rational denominator = numerator + v(b) - s * v(a);
  if (denominator == 0) {
    if (numerator == 0) return Rational(0);  // ratio constantly s
    throw NoSolutionError("ratio " + to_string(s) + " is never attained");
  }
  Rational alpha = numerator / denominator;
  if (alpha < 0 || alpha > 1) {
    throw NoSolutionError("ratio " + to_string(s) + " is not attained on [0, 1]");
  }
  return alpha;
}

ViolationWindow violation_times(const LineSegment& seg, ObjectId a, ObjectId b,
                                const Rational& r) {
  if (r <= 0 || r >= 1) throw std::domain_error("violation_times needs 0 < r < 1");
  // Violated at alpha iff B - rA > 0 and A - rB > 0 with A, B the utilities of
  // a, b above the running minimum. Both are linear on envelope pieces.
  auto excess = [&](const Rational& alpha, ObjectId x, ObjectId y) -> Rational {
    Rational low = seg.envelope(alpha);
    return (seg.value(y, alpha) - low) - r * (seg.value(x, alpha) - low);
  };
  ViolationWindow window;
  auto points = seg.envelope_breakpoints();
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    const auto& p = points[i];
    const auto& q = points[i + 1];
    Span f = linear_region(p, q, excess(p, a, b), excess(q, a, b), true);
    Span g = linear_region(p, q, excess(p, b, a), excess(q, b, a), true);
    Span both = intersect(f, g);
    if (!both.valid()) continue;
    if (window.empty) {
      window = ViolationWindow{false, both.lo, both.hi};
    } else {
      window.lower = min(window.lower, both.lo);
      window.upper = max(window.upper, both.hi);
    }
  }
  return window;
}

PreferenceOrder induced_order(const UtilityFunction& u) {
  std::vector<ObjectId> ids(u.size());
  for (std::size_t j = 0; j < u.size(); ++j) ids[j] = obj(j);
  std::sort(ids.begin(), ids.end(), [&](ObjectId x, ObjectId y) { return u(x) > u(y); });
  for (std::size_t k = 0; k + 1 < ids.size(); ++k) {
    if (u(ids[k]) == u(ids[k + 1])) {
      throw std::invalid_argument("utility function has ties; no strict order");
    }
  }
  return PreferenceOrder(std::move(ids));
}

PassedSequence passed_sequence(const LineSegment& seg) {
  const auto& u = seg.start();
  const auto& v = seg.end();
  PassedSequence out;
  out.orders.push_back(induced_order(u));
  induced_order(v);  // strictness check
  const auto m = seg.objects();
  std::vector<Rational> times;
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = 0; b < m; ++b) {
      if (u.values[a] > u.values[b] && v.values[a] < v.values[b]) {
        times.push_back(transition_time(seg, obj(a), obj(b)));
      }
    }
  }
  std::sort(times.begin(), times.end());
  for (std::size_t k = 0; k < times.size(); ++k) {
    if (k > 0 && times[k] == times[k - 1]) {
      out.simultaneous = true;
      continue;
    }
    const Rational& t = times[k];
    // order just after t: by value at t, ties broken by slope
    std::vector<ObjectId> ids(m);
    for (std::size_t j = 0; j < m; ++j) ids[j] = obj(j);
    std::sort(ids.begin(), ids.end(), [&](ObjectId x, ObjectId y) {
      Rational vx = seg.value(x, t), vy = seg.value(y, t);
      if (vx != vy) return vx > vy;
      return v(x) - u(x) > v(y) - u(y);
    });
    out.orders.emplace_back(std::move(ids));
    out.times.push_back(t);
  }
  return out;
}

bool check_canonical_conditions(const LineSegment& seg, const PreferenceOrder& truth,
                                const PreferenceOrder& target) {
  if (!consistent(seg.start(), truth) || !consistent(seg.end(), target)) {
    throw std::invalid_argument("segment endpoints are not consistent with the given orders");
  }
  const auto m = truth.size();
  struct Pair {
    ObjectId hi, lo;  // hi above lo under truth, reversed under target
    Rational time;
  };
  std::vector<Pair> inverted;
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = 0; b < m; ++b) {
      if (truth.prefers(obj(a), obj(b)) && target.prefers(obj(b), obj(a))) {
        inverted.push_back({obj(a), obj(b), transition_time(seg, obj(a), obj(b))});
      }
    }
  }
  for (const auto& first : inverted) {
    for (const auto& second : inverted) {
      if (first.hi == second.hi && first.lo == second.lo) continue;
      const ObjectId a = first.hi, b = first.lo, c = second.hi, d = second.lo;
      bool must_precede = target.prefers(b, d) || (b == d && truth.prefers(c, a));
      if (must_precede && !(first.time < second.time)) return false;
    }
  }
  return true;
}

bool check_window_separation(const LineSegment& seg, const PreferenceOrder& truth,
                             const PreferenceOrder& target, const Rational& r) {
  const auto m = truth.size();
  struct Pair {
    Rational time;
    ViolationWindow window;
  };
  std::vector<Pair> inverted;
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = 0; b < m; ++b) {
      if (truth.prefers(obj(a), obj(b)) && target.prefers(obj(b), obj(a))) {
        inverted.push_back(
            {transition_time(seg, obj(a), obj(b)), violation_times(seg, obj(a), obj(b), r)});
      }
    }
  }
  for (const auto& first : inverted) {
    for (const auto& second : inverted) {
      if (!(first.time < second.time)) continue;
      // a pair that is never in violation still has to wait for the earlier
      // pair's window to close before it swaps
      const Rational& closes = first.window.empty ? first.time : first.window.upper;
      const Rational& opens = second.window.empty ? second.time : second.window.lower;
      if (closes > opens) return false;
    }
  }
  return true;
}

PassageCertificate urbi_passage_witness(const LineSegment& seg, const Rational& r) {
  if (r <= 0 || r > 1) throw std::domain_error("urbi_passage_witness needs 0 < r <= 1");
  auto sequence = passed_sequence(seg);
  PassageCertificate cert;
  cert.orders = sequence.orders;
  cert.simultaneous = sequence.simultaneous;
  if (sequence.simultaneous) {
    cert.failed_at = 0;
    return cert;
  }
  const auto points = seg.envelope_breakpoints();
  const auto K = sequence.orders.size();
  for (std::size_t k = 0; k < K; ++k) {
    const auto& order = sequence.orders[k];
    Span consistency{k == 0 ? Rational(0) : sequence.times[k - 1],
                     k + 1 == K ? Rational(1) : sequence.times[k], k == 0, k + 1 == K, false};
    std::optional<Rational> witness;
    for (std::size_t i = 0; i + 1 < points.size() && !witness; ++i) {
      Span region = intersect(consistency, Span{points[i], points[i + 1], true, true, false});
      // URBI(r) for every ordered pair: r (A - low) - (B - low) >= 0
      for (std::size_t hi = 0; hi < order.size() && region.valid(); ++hi) {
        for (std::size_t lo = hi + 1; lo < order.size() && region.valid(); ++lo) {
          auto slack = [&](const Rational& alpha) -> Rational {
            Rational low = seg.envelope(alpha);
            return r * (seg.value(order[hi], alpha) - low) - (seg.value(order[lo], alpha) - low);
          };
          region = intersect(region, linear_region(points[i], points[i + 1], slack(points[i]),
                                                   slack(points[i + 1]), false));
        }
      }
      if (!region.valid()) continue;
      witness = region.lo_closed ? region.lo : (region.lo + region.hi) / 2;
    }
    if (!witness) {
      cert.failed_at = k;
      return cert;
    }
    cert.witnesses.push_back(*witness);
  }
  cert.complete = true;
  return cert;
}

TargetChoice choose_target_utility(const UtilityFunction& start, const PreferenceOrder& truth,
                                   const PreferenceOrder& target, const Rational& r,
                                   std::size_t max_doublings) {
  TargetChoice choice;
  choice.base = Rational(static_cast<unsigned long>(2 * truth.size()));
  if (choice.base <= 1) choice.base = 2;
  for (std::size_t step = 0;; ++step) {
    choice.target = construct_target_utility(target, choice.base);
    choice.doublings = step;
    LineSegment seg(start, choice.target);
    choice.canonical = check_canonical_conditions(seg, truth, target);
    choice.separated = r < 1 ? check_window_separation(seg, truth, target, r) : true;
    bool target_in_urbi = urbi_satisfies(choice.target, r);
    if ((choice.canonical && choice.separated && target_in_urbi) || step == max_doublings) {
      return choice;
    }
    choice.base *= 2;
  }
}

nlohmann::json PassageCertificate::to_json(std::span<const std::string> names) const {
  nlohmann::json orders_json = nlohmann::json::array();
  for (const auto& order : orders) orders_json.push_back(format_order(order, names));
  nlohmann::json witnesses_json = nlohmann::json::array();
  for (const auto& w : witnesses) witnesses_json.push_back(psp::to_string(w));
  nlohmann::json out{{"orders", orders_json},
                     {"witnesses", witnesses_json},
                     {"simultaneous", simultaneous},
                     {"complete", complete}};
  out["failed_at"] = failed_at ? nlohmann::json(*failed_at) : nlohmann::json(nullptr);
  return out;
}

}  // namespace psp
