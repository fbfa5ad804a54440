#include <doctest.h>

#include <algorithm>

#include "psp/dominance.hpp"
#include "psp/errors.hpp"
#include "psp/geometry.hpp"
#include "support.hpp"

using namespace psp;

namespace {

Rational q(long p, long d) { return fraction(p, d); }
constexpr ObjectId kA{0}, kB{1}, kC{2}, kD{3};

// bisection oracle for u_alpha(b) / u_alpha(a) = s, assuming monotone ratio
Rational bisect_ratio(const LineSegment& seg, ObjectId a, ObjectId b, const Rational& s) {
  Rational lo = 0, hi = 1;
  auto f = [&](const Rational& t) -> Rational { return seg.value(b, t) - s * seg.value(a, t); };
  const int start = sgn(f(lo));
  for (int i = 0; i < 60; ++i) {
    Rational mid = (lo + hi) / 2;
    if (sgn(f(mid)) == start) lo = mid;
    else hi = mid;
  }
  return (lo + hi) / 2;
}

}  // namespace

TEST_CASE("consistency") {
  auto abc = PreferenceOrder::of({0, 1, 2});
  CHECK(consistent(UtilityFunction{{3, 2, 1}}, abc));
  CHECK_FALSE(consistent(UtilityFunction{{3, 3, 1}}, abc));
  CHECK_FALSE(consistent(UtilityFunction{{3, 3, 1}}, PreferenceOrder::of({1, 0, 2})));
  CHECK_FALSE(consistent(UtilityFunction{{1, 2}}, PreferenceOrder::of({0, 1})));
}

TEST_CASE("URBI membership examples") {
  UtilityFunction u{{1, q(1, 2), 0}};
  CHECK(urbi_satisfies(u, q(1, 2)));
  CHECK_FALSE(urbi_satisfies(u, q(1, 4)));
  CHECK(urbi_satisfies(UtilityFunction{{5, 7, 1}}, 1));
  // the minimum is subtracted first
  CHECK(urbi_satisfies(UtilityFunction{{11, 2, 1}}, q(1, 10)));
  CHECK_FALSE(urbi_satisfies(UtilityFunction{{11, 3, 1}}, q(1, 10)));
}

TEST_CASE("URBI agrees with the all-pairs definition and is monotone in r") {
  testing::Gen gen(41);
  for (int i = 0; i < 500; ++i) {
    std::size_t m = 2 + gen.below(4);
    UtilityFunction u{std::vector<Rational>(m)};
    for (auto& v : u.values) v = gen.grid(0, 60, 3);
    Rational r = gen.grid(0, 20, 20);
    Rational lo = *std::min_element(u.values.begin(), u.values.end());
    bool all_pairs = true;
    for (auto& a : u.values) {
      for (auto& b : u.values) {
        if (a > b && r * (a - lo) < b - lo) all_pairs = false;
      }
    }
    CHECK(urbi_satisfies(u, r) == all_pairs);
    if (urbi_satisfies(u, r)) {
      for (Rational r2 = r; r2 <= 1; r2 += q(1, 20)) CHECK(urbi_satisfies(u, r2));
    }
  }
}

TEST_CASE("urbi_min_bound examples") {
  CHECK(urbi_min_bound(UtilityFunction{{1, q(1, 3), q(1, 9), 0}}) == q(1, 3));
  CHECK(urbi_min_bound(UtilityFunction{{1, q(9, 10), 0}}) == q(9, 10));
  CHECK(urbi_min_bound(UtilityFunction{{1, 0}}) == 0);
  CHECK_THROWS(urbi_min_bound(UtilityFunction{{2, 2, 2}}));
  UtilityFunction u{{7, 3, 2, 1}};
  auto b = urbi_min_bound(u);
  CHECK(urbi_satisfies(u, b));
  CHECK_FALSE(urbi_satisfies(u, b - q(1, 1000000)));
}

TEST_CASE("geometric utility") {
  auto g = geometric_utility(PreferenceOrder::of({0, 1, 2, 3}), q(1, 10));
  CHECK(g.values == std::vector<Rational>{1, q(1, 10), q(1, 100), 0});
  CHECK(urbi_satisfies(g, q(1, 10)));
  CHECK(urbi_min_bound(g) == q(1, 10));
  CHECK_THROWS_AS(geometric_utility(PreferenceOrder::of({0, 1}), 1), std::domain_error);
  CHECK_THROWS_AS(geometric_utility(PreferenceOrder::of({0, 1}), 0), std::domain_error);
}

TEST_CASE("geometric-utility bridge: EU difference is r^(m-2) delta_(m-1)") {
  testing::Gen gen(2024);
  for (int i = 0; i < 2000; ++i) {
    std::size_t m = 2 + gen.below(4);
    auto order = gen.order(m);
    auto x = gen.lottery(m, 12), y = gen.lottery(m, 10);
    Rational r = gen.grid(1, 99, 100);
    auto u = geometric_utility(order, r);
    auto d = delta_partial_sums(order, x, y, r);
    CHECK(testing::eu_oracle(u.values, x) - testing::eu_oracle(u.values, y) ==
          pow(r, static_cast<unsigned>(m - 2)) * d.adjusted(m - 1));
  }
}

TEST_CASE("target utility") {
  auto v = construct_target_utility(PreferenceOrder::of({1, 0, 2}), 10);
  CHECK(v.values == std::vector<Rational>{10, 100, 1});
  CHECK_THROWS_AS(construct_target_utility(PreferenceOrder::of({0, 1}), 1), std::domain_error);
  for (Rational c : {Rational(3), Rational(16), q(7, 2)}) {
    for (std::size_t m = 2; m <= 5; ++m) {
      auto order = all_preference_orders(m).back();
      auto t = construct_target_utility(order, c);
      CHECK(consistent(t, order));
      CHECK(urbi_min_bound(t) == (pow(c, m - 2) - 1) / (pow(c, m - 1) - 1));
    }
  }
}

TEST_CASE("transition time examples") {
  LineSegment s1(UtilityFunction{{2, 1}}, UtilityFunction{{1, 2}});
  CHECK(transition_time(s1, kA, kB) == q(1, 2));
  LineSegment s2(UtilityFunction{{3, 1}}, UtilityFunction{{1, 2}});
  auto t = transition_time(s2, kA, kB);
  CHECK(t == q(2, 3));
  CHECK(s2.value(kA, t) == s2.value(kB, t));
  CHECK_THROWS_AS(transition_time(s2, kB, kA), NoSolutionError);
  LineSegment flat(UtilityFunction{{3, 1}}, UtilityFunction{{4, 1}});
  CHECK_THROWS_AS(transition_time(flat, kA, kB), NoSolutionError);
}

TEST_CASE("ratio crossing time") {
  LineSegment s1(UtilityFunction{{2, 1}}, UtilityFunction{{1, 2}});
  CHECK(ratio_crossing_time(s1, kA, kB, 1) == transition_time(s1, kA, kB));
  CHECK(ratio_crossing_time(s1, kA, kB, q(1, 2)) == 0);
  CHECK_THROWS_AS(ratio_crossing_time(s1, kA, kB, 5), NoSolutionError);

  testing::Gen gen(9);
  for (int i = 0; i < 200; ++i) {
    UtilityFunction u{{gen.grid(20, 40, 1), gen.grid(1, 19, 1)}};
    UtilityFunction v{{gen.grid(1, 19, 1), gen.grid(20, 40, 1)}};
    LineSegment seg(u, v);
    Rational s = gen.grid(1, 40, 20);
    Rational start = u.values[1] / u.values[0], end = v.values[1] / v.values[0];
    if (s < start || s > end) continue;
    auto exact = ratio_crossing_time(seg, kA, kB, s);
    auto approx = bisect_ratio(seg, kA, kB, s);
    CHECK(abs(exact - approx) < Rational(1) / Rational(Integer("1000000000000")));
    CHECK(seg.value(kB, exact) == s * seg.value(kA, exact));
  }
}

TEST_CASE("violation windows") {
  Rational r = q(1, 10);
  SUBCASE("both endpoints in URBI(r) with a > b: never violated") {
    LineSegment seg(UtilityFunction{{1, q(1, 20), 0}}, UtilityFunction{{5, q(1, 2), 0}});
    CHECK(violation_times(seg, kA, kB, r).empty);
  }
  SUBCASE("a window opens and closes around the swap") {
    LineSegment seg(UtilityFunction{{1, q(1, 100), 0}}, UtilityFunction{{1, 100, 0}});
    auto w = violation_times(seg, kA, kB, r);
    REQUIRE_FALSE(w.empty);
    auto t = transition_time(seg, kA, kB);
    CHECK(w.lower < t);
    CHECK(t < w.upper);
    // min is constantly 0 here, so the window is exactly the raw-ratio window
    CHECK(w.lower == ratio_crossing_time(seg, kA, kB, r));
    CHECK(w.upper == ratio_crossing_time(seg, kB, kA, r));
  }
  SUBCASE("the envelope matters: the minimum object changes along the path") {
    LineSegment seg(UtilityFunction{{10, 1, 0}}, UtilityFunction{{0, 10, 1}});
    auto points = seg.envelope_breakpoints();
    CHECK(points.front() == 0);
    CHECK(points.back() == 1);
    // a and b cross at 9/19 above the envelope; a meets c on it at 10/11
    CHECK(std::find(points.begin(), points.end(), q(10, 11)) != points.end());
    for (std::size_t i = 0; i + 1 < points.size(); ++i) {
      Rational lo = points[i], hi = points[i + 1], mid = (lo + hi) / 2;
      CHECK(seg.envelope(mid) * 2 == seg.envelope(lo) + seg.envelope(hi));
    }
    auto w = violation_times(seg, kA, kB, r);
    REQUIRE_FALSE(w.empty);
    // check inf/sup against a dense scan of the definition
    auto violated = [&](const Rational& t) {
      auto ut = seg.at(t);
      Rational lo = seg.envelope(t);
      Rational hi = max(ut(kA), ut(kB)), low = min(ut(kA), ut(kB));
      return hi > low && low - lo > r * (hi - lo);
    };
    Rational first = -1, last = -1;
    for (long k = 0; k <= 4000; ++k) {
      Rational t = q(k, 4000);
      if (violated(t)) {
        if (first < 0) first = t;
        last = t;
      }
    }
    CHECK(w.lower <= first);
    CHECK(first - w.lower <= q(1, 4000));
    CHECK(w.upper >= last);
    CHECK(w.upper - last <= q(1, 4000));
  }
}

TEST_CASE("passed sequence") {
  LineSegment two(UtilityFunction{{2, 1}}, UtilityFunction{{1, 2}});
  auto p = passed_sequence(two);
  CHECK(p.orders == std::vector<PreferenceOrder>{PreferenceOrder::of({0, 1}), PreferenceOrder::of({1, 0})});
  CHECK_FALSE(p.simultaneous);

  UtilityFunction u{{3, 2, 1}};
  auto still = passed_sequence(LineSegment(u, u));
  CHECK(still.orders.size() == 1);
  CHECK(still.times.empty());

  // a and c meet b at the same alpha
  LineSegment triple(UtilityFunction{{3, 2, 1}}, UtilityFunction{{1, 2, 3}});
  CHECK(passed_sequence(triple).simultaneous);
  CHECK_THROWS_AS(passed_sequence(LineSegment(UtilityFunction{{1, 1}}, u)), std::invalid_argument);
}

TEST_CASE("Claims 2 and 1 on random interior starts, with window bracketing") {
  testing::Gen gen(77);
  Rational r = q(1, 10);
  for (int trial = 0; trial < 150; ++trial) {
    std::size_t m = 3 + trial % 3;
    auto truth = gen.order(m), target = gen.order(m);
    auto u = testing::interior_start(gen, truth, r);
    auto choice = choose_target_utility(u, truth, target, r);
    CHECK(choice.canonical);
    CHECK(choice.separated);
    CHECK(consistent(choice.target, target));
    LineSegment seg(u, choice.target);
    CHECK(check_canonical_conditions(seg, truth, target));
    CHECK(passed_sequence(seg).orders == canonical_transition(truth, target));
    auto cert = urbi_passage_witness(seg, r);
    REQUIRE(cert.complete);
    for (std::size_t k = 0; k < cert.orders.size(); ++k) {
      auto at = seg.at(cert.witnesses[k]);
      CHECK(consistent(at, cert.orders[k]));
      CHECK(urbi_satisfies(at, r));
      if (k) CHECK(cert.witnesses[k - 1] < cert.witnesses[k]);
    }
    for (std::uint32_t a = 0; a < m; ++a) {
      for (std::uint32_t b = 0; b < m; ++b) {
        ObjectId oa{a}, ob{b};
        if (!(truth.prefers(oa, ob) && target.prefers(ob, oa))) continue;
        auto w = violation_times(seg, oa, ob, r);
        if (w.empty) continue;
        auto t = transition_time(seg, oa, ob);
        CHECK(w.lower < t);
        CHECK(t < w.upper);
        // the raw ratio is only defined while its denominator stays positive
        auto crossing = [&](ObjectId x, ObjectId y) -> std::optional<Rational> {
          try {
            return ratio_crossing_time(seg, x, y, r);
          } catch (const NoSolutionError&) {
            return std::nullopt;
          }
        };
        if (auto lo = crossing(oa, ob)) CHECK(*lo <= w.lower);
        if (auto hi = crossing(ob, oa)) CHECK(w.upper <= *hi);
      }
    }
  }
}

TEST_CASE("Claim 2 with small C can fail and the adaptive rule repairs it") {
  // a>b>c -> c>b>a with a tiny base: the canonical path needs c to overtake
  // a before b does
  auto truth = PreferenceOrder::of({0, 1, 2}), target = PreferenceOrder::of({2, 1, 0});
  UtilityFunction u{{1, q(99, 100), q(1, 100)}};
  bool some_small_base_fails = false;
  for (Rational c : {q(11, 10), q(3, 2), Rational(2)}) {
    LineSegment seg(u, construct_target_utility(target, c));
    bool canonical = passed_sequence(seg).orders == canonical_transition(truth, target);
    CHECK(canonical == check_canonical_conditions(seg, truth, target));
    some_small_base_fails |= !canonical;
  }
  CHECK(some_small_base_fails);
  auto choice = choose_target_utility(u, truth, target, q(1, 2));
  LineSegment seg(u, choice.target);
  CHECK(passed_sequence(seg).orders == canonical_transition(truth, target));
}

TEST_CASE("canonical conditions agree with the passed sequence (m = 4, random u and v)") {
  testing::Gen gen(101);
  for (int i = 0; i < 400; ++i) {
    auto truth = gen.order(4), target = gen.order(4);
    UtilityFunction u{std::vector<Rational>(4)}, v{std::vector<Rational>(4)};
    // strictly decreasing along each order, random gaps
    Rational a = 0, b = 0;
    for (std::size_t k = 4; k-- > 0;) {
      a += gen.grid(1, 20, 1);
      b += gen.grid(1, 20, 1);
      u.values[truth[k].index] = a;
      v.values[target[k].index] = b;
    }
    LineSegment seg(u, v);
    auto passed = passed_sequence(seg);
    if (passed.simultaneous) continue;
    CHECK(check_canonical_conditions(seg, truth, target) ==
          (passed.orders == canonical_transition(truth, target)));
  }
}

TEST_CASE("passage fails on the boundary of URBI(r^2)") {
  // u(d)/u(c) is exactly r^2; in c>a>d>b, URBI(r) forces d - b <= r^2 (c - b),
  // tight at the start and broken for every alpha > 0 on any path towards
  // a v ranking d above b above c
  Rational r = q(1, 10);
  UtilityFunction u{{q(79, 5000000), 0, 1, q(1, 100)}};
  auto truth = PreferenceOrder::of({2, 3, 0, 1});
  auto target = PreferenceOrder::of({0, 3, 1, 2});
  CHECK(urbi_satisfies(u, r * r));
  for (Rational c : {Rational(Integer(1) << 20), Rational(Integer(1) << 40)}) {
    LineSegment seg(u, construct_target_utility(target, c));
    REQUIRE(passed_sequence(seg).orders == canonical_transition(truth, target));
    auto cert = urbi_passage_witness(seg, r);
    CHECK_FALSE(cert.complete);
    REQUIRE(cert.failed_at);
    CHECK(cert.orders[*cert.failed_at] == PreferenceOrder::of({2, 0, 3, 1}));
  }
}

TEST_CASE("trivial certificates") {
  UtilityFunction u{{3, 2, 1}};
  auto cert = urbi_passage_witness(LineSegment(u, u), 1);
  CHECK(cert.complete);
  CHECK(cert.witnesses == std::vector<Rational>{0});
  CHECK_THROWS_AS(urbi_passage_witness(LineSegment(u, u), 0), std::domain_error);
  // m <= 2: any path is canonical
  auto two = choose_target_utility(UtilityFunction{{1, 0}}, PreferenceOrder::of({0, 1}),
                                   PreferenceOrder::of({1, 0}), q(1, 3));
  CHECK(two.canonical);
}

TEST_CASE("certificate JSON") {
  LineSegment seg(UtilityFunction{{1, q(1, 100), 0}}, UtilityFunction{{1, 100, 0}});
  auto cert = urbi_passage_witness(seg, q(1, 10));
  auto j = cert.to_json(default_object_names(3));
  CHECK(j["orders"][0] == "a>b>c");
  CHECK(j["complete"] == cert.complete);
  CHECK(j["witnesses"].size() == cert.witnesses.size());
}
