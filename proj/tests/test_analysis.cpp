#include <doctest.h>

#include <cstdlib>

#include "psp/analysis.hpp"
#include "psp/counterexample.hpp"
#include "psp/errors.hpp"
#include "psp/geometry.hpp"
#include "support.hpp"

using namespace psp;

namespace {

Rational q(long p, long d) { return fraction(p, d); }

// Brute-force discounted check over every (agent, profile, misreport),
// reading rows straight from the table.
bool brute_r_psp(const TabulatedMechanism& mech, const Rational& r, bool local_only) {
  for (std::size_t p = 0; p < mech.profile_count(); ++p) {
    for (std::size_t i = 0; i < mech.agents(); ++i) {
      const auto& truth = mech.orders()[mech.report(p, i)];
      for (std::size_t o = 0; o < mech.order_count(); ++o) {
        if (o == mech.report(p, i)) continue;
        if (local_only && testing::kendall_tau(truth, mech.orders()[o]) != 1) continue;
        const auto& y = mech.row(mech.with_report(p, i, o), i);
        if (!testing::discounted_oracle(truth, mech.row(p, i), y, r)) return false;
      }
    }
  }
  return true;
}

TabulatedMechanism constant_mechanism() {
  TabulatedMechanism::Assembler build(Setting::unit(2, 2), default_object_names(2));
  for (std::size_t p = 0; p < build.profile_count(); ++p) build.set(p, {{1, 0}, {0, 1}});
  return std::move(build).finish();
}

// one agent, two objects; reporting b>a yields a for sure
TabulatedMechanism inverted_mechanism() {
  TabulatedMechanism::Assembler build(Setting::unit(1, 2), default_object_names(2));
  auto names = default_object_names(2);
  build.set(build.profile_index({parse_order("a>b", names)}), {{0, 1}});
  build.set(build.profile_index({parse_order("b>a", names)}), {{1, 0}});
  return std::move(build).finish();
}

std::vector<TabulatedMechanism> small_zoo() {
  std::vector<TabulatedMechanism> zoo;
  for (auto [n, m] : {std::pair{2, 2}, {2, 3}, {3, 2}, {3, 3}}) {
    zoo.push_back(tabulate_rsd(Setting::covering(n, m)));
    zoo.push_back(tabulate_ps(Setting::covering(n, m)));
  }
  zoo.push_back(build_phi(PhiParams(10, derived_local_interval(10).interval.midpoint())));
  zoo.push_back(build_phi(PhiParams(5, derived_local_interval(5).interval.midpoint())));
  return zoo;
}

}  // namespace

TEST_CASE("SD and LD checks on simple tables") {
  CHECK(check_sd_sp(tabulate_rsd(Setting::unit(2, 2))).holds);
  CHECK(check_sd_sp(constant_mechanism()).holds);
  CHECK(check_ld_sp(constant_mechanism()).holds);

  auto inv = inverted_mechanism();
  auto ld = check_ld_sp(inv);
  CHECK_FALSE(ld.holds);
  REQUIRE(ld.witness);
  CHECK(ld.witness->agent == 0);
  CHECK(ld.witness->local);
  CHECK(max_degree(inv).degree == DegreeValue::exact(0));
  CHECK(max_degree(constant_mechanism()).degree == DegreeValue::exact(1));
  CHECK(max_degree(tabulate_rsd(Setting::unit(3, 3))).degree == DegreeValue::exact(1));
}

TEST_CASE("PS 3x3: SD fails, degree 3/4 from both sides") {
  auto ps = tabulate_ps(Setting::unit(3, 3));
  auto sd = check_sd_sp(ps);
  CHECK_FALSE(sd.holds);
  REQUIRE(sd.witness);
  // the witness really is a violation
  const auto& w = *sd.witness;
  auto p = w.profile_index;
  auto y = ps.row(ps.with_report(p, w.agent, order_index(w.misreport)), w.agent);
  CHECK_FALSE(testing::sd_oracle(w.profile[w.agent], ps.row(p, w.agent), y));

  auto local = max_degree(ps, Scope::kLocal), global = max_degree(ps, Scope::kGlobal);
  CHECK(local.degree == DegreeValue::exact(q(3, 4)));
  CHECK(global.degree == DegreeValue::exact(q(3, 4)));
  CHECK(brute_r_psp(ps, q(3, 4), false));
  CHECK_FALSE(brute_r_psp(ps, q(3, 4) + q(1, 1000000), false));

  auto report = verify_theorem1(ps);
  CHECK(report.theorem1_ok);
  CHECK(report.theorem1_margin == q(3, 4) - q(9, 16));
  auto j = report.to_json(ps.names());
  CHECK(j["r_local"] == "3/4");
  CHECK(j["theorem1_ok"] == true);
}

TEST_CASE("check_r_psp matches brute force on the zoo") {
  for (const auto& mech : small_zoo()) {
    for (Rational r : {q(1, 100), q(1, 10), q(1, 2), q(3, 4), q(9, 10), Rational(1)}) {
      CHECK(check_r_psp(mech, r).holds == brute_r_psp(mech, r, false));
      CHECK(check_r_psp(mech, r, Scope::kLocal).holds == brute_r_psp(mech, r, true));
    }
  }
  CHECK_THROWS_AS(check_r_psp(constant_mechanism(), 0), std::domain_error);
  CHECK_THROWS_AS(check_r_psp(constant_mechanism(), q(3, 2)), std::domain_error);
}

TEST_CASE("monotonicity, local vs global, Facts 1 and 2") {
  for (const auto& mech : small_zoo()) {
    bool seen_false = false;
    for (long k = 1; k <= 20; ++k) {
      Rational r = q(k, 20);
      bool global = check_r_psp(mech, r).holds;
      // once false, false for every larger r
      if (seen_false) CHECK_FALSE(global);
      seen_false |= !global;
      if (global) CHECK(check_r_psp(mech, r, Scope::kLocal).holds);
    }
    CHECK(check_r_psp(mech, 1).holds == check_sd_sp(mech).holds);
    CHECK(check_sd_sp(mech, Scope::kLocal).holds == check_sd_sp(mech).holds);
    CHECK(check_ld_sp(mech, Scope::kLocal).holds == check_ld_sp(mech).holds);
  }
}

TEST_CASE("witnesses do not depend on the worker count") {
  auto ps = tabulate_ps(Setting::unit(3, 3));
  auto phi = build_phi(PhiParams(10, derived_local_interval(10).interval.midpoint()));
  auto names = ps.names();
  std::vector<std::string> seen;
  for (const char* workers : {"1", "2", "5"}) {
    setenv("PSP_WORKERS", workers, 1);
    CHECK(worker_count() == std::stoul(workers));
    auto sd = check_sd_sp(ps);
    auto rp = check_r_psp(phi, q(1, 10));
    auto deg = max_degree(ps);
    seen.push_back(sd.witness->describe(names) + rp.witness->describe(phi.names()) +
                   deg.binding->describe(names) + deg.degree.to_string());
  }
  unsetenv("PSP_WORKERS");
  CHECK(seen[0] == seen[1]);
  CHECK(seen[0] == seen[2]);
}

TEST_CASE("phi at s = 10: locally 1/10-PSP, globally not, degree in [1/100, 1/10]") {
  auto alpha = derived_local_interval(10).interval.midpoint();
  auto phi = build_phi(PhiParams(10, alpha));
  CHECK(check_ld_sp(phi).holds);
  CHECK(check_r_psp(phi, q(1, 10), Scope::kLocal).holds);
  auto global = check_r_psp(phi, q(1, 10));
  CHECK_FALSE(global.holds);
  REQUIRE(global.witness);
  CHECK_FALSE(global.witness->local);

  // the manipulation singled out in the construction fails on its own
  auto names = phi.names();
  auto truth = parse_order("a>b>c>d", names), lie = parse_order("c>a>b>d", names);
  CHECK_FALSE(r_discounted_dominates(truth, phi.row(order_index(truth), 0),
                                     phi.row(order_index(lie), 0), q(1, 10)));

  auto report = verify_theorem1(phi);
  CHECK(report.r_local == DegreeValue::exact(q(1, 10)));
  CHECK(report.r_global.lower >= q(1, 100));
  CHECK(report.r_global.upper <= q(1, 10));
  CHECK(report.theorem1_ok);
}

TEST_CASE("audit: SD-SP mechanism at r = 1 is clean") {
  auto rsd = tabulate_rsd(Setting::unit(2, 2));
  auto audit = sampled_utility_audit(rsd, 1, 100, 4);
  CHECK(audit.violations == 0);
  CHECK(audit.samples_per_order == 100);
  CHECK(audit.utilities > 0);
}

TEST_CASE("audit at the measured degree is clean and deterministic") {
  auto ps = tabulate_ps(Setting::unit(3, 3));
  auto a = sampled_utility_audit(ps, q(3, 4), 200, 99);
  auto b = sampled_utility_audit(ps, q(3, 4), 200, 99);
  CHECK(a.violations == 0);
  CHECK(a.to_json(ps.names()) == b.to_json(ps.names()));
  REQUIRE(a.min_margin);
  CHECK(*a.min_margin >= 0);
  auto c = sampled_utility_audit(ps, q(3, 4), 200, 100);
  CHECK(c.violations == 0);
}

TEST_CASE("audit negative control: a corrupted row is caught") {
  auto rsd = tabulate_rsd(Setting::unit(1, 3));
  auto names = rsd.names();
  auto p = rsd.profile_index({parse_order("a>b>c", names)});
  auto bad = rsd.with_row(p, 0, {0, 0, 1});
  CHECK_FALSE(check_ld_sp(bad).holds);
  auto audit = sampled_utility_audit(bad, q(1, 2), 50, 1);
  CHECK(audit.violations > 0);
  REQUIRE(audit.first_violation);
  const auto& v = *audit.first_violation;
  CHECK(v.margin < 0);
  CHECK(v.manipulation.profile_index == p);
  // recompute the margin by hand
  auto y = bad.row(bad.with_report(p, 0, order_index(v.manipulation.misreport)), 0);
  CHECK(testing::eu_oracle(v.utility.values, bad.row(p, 0)) - testing::eu_oracle(v.utility.values, y) ==
        v.margin);
  CHECK(urbi_satisfies(v.utility, q(1, 2)));
  CHECK_THROWS_AS(sampled_utility_audit(rsd, 0, 10, 1), std::domain_error);
}

TEST_CASE("manipulation rendering") {
  auto inv = inverted_mechanism();
  auto w = *check_sd_sp(inv).witness;
  CHECK(w.describe(inv.names()) == "agent 0 at profile (a>b) reports b>a (local)");
  auto j = w.to_json(inv.names());
  CHECK(j["misreport"] == "b>a");
  CHECK(j["local"] == true);
}
