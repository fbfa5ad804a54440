#include "psp/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <functional>
#include <random>
#include <stdexcept>
#include <thread>
#include <unordered_map>

#include "psp/errors.hpp"
#include "psp/geometry.hpp"

namespace psp {

std::size_t worker_count() {
  if (const char* env = std::getenv("PSP_WORKERS")) {
    char* end = nullptr;
    long value = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && value >= 1) return static_cast<std::size_t>(value);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

// Runs body(i) for i in [0, count) across the worker pool.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body) {
  const std::size_t workers = std::min(worker_count(), std::max<std::size_t>(count, 1));
  if (workers <= 1 || count < 64) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  auto run = [&] {
    constexpr std::size_t kChunk = 16;
    while (!failed.load()) {
      std::size_t begin = next.fetch_add(kChunk);
      if (begin >= count) return;
      std::size_t end = std::min(count, begin + kChunk);
      try {
        for (std::size_t i = begin; i < end; ++i) body(i);
      } catch (...) {
        if (!failed.exchange(true)) failure = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w + 1 < workers; ++w) pool.emplace_back(run);
  run();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

// A distinct comparison: truthful order, truthful row, misreport row.
struct Triple {
  std::uint32_t order;
  TabulatedMechanism::RowId truthful;
  TabulatedMechanism::RowId misreport;
};

std::uint64_t key_of(std::uint32_t order, std::uint32_t x, std::uint32_t y) {
  return (static_cast<std::uint64_t>(order) << 48) | (static_cast<std::uint64_t>(x) << 24) | y;
}

// Walks all manipulations in the fixed order. visit(agent, profile, truth id,
// misreport id, misreport profile) returns false to stop.
class ManipulationWalker {
 public:
  ManipulationWalker(const TabulatedMechanism& mech, Scope scope) : mech_(mech) {
    if (mech.pool_size() >= (1u << 24)) {
      throw EnumerationLimitError("too many distinct assignment rows to analyze");
    }
    const auto& orders = mech.orders();
    misreports_.resize(orders.size());
    for (std::size_t o = 0; o < orders.size(); ++o) {
      for (std::size_t p = 0; p < orders.size(); ++p) {
        if (p == o) continue;
        if (scope == Scope::kLocal && !is_neighbor(orders[o], orders[p])) continue;
        misreports_[o].push_back(static_cast<std::uint32_t>(p));
      }
    }
  }

  template <typename Visit>
  void walk(Visit&& visit) const {
    const std::size_t F = mech_.order_count();
    std::size_t divisor = 1;
    std::vector<std::size_t> divisors(mech_.agents());
    for (std::size_t i = mech_.agents(); i-- > 0;) {
      divisors[i] = divisor;
      divisor *= F;
    }
    for (std::size_t i = 0; i < mech_.agents(); ++i) {
      for (std::size_t p = 0; p < mech_.profile_count(); ++p) {
        const std::size_t truth = (p / divisors[i]) % F;
        const std::size_t base = p - truth * divisors[i];
        const auto x = mech_.row_id(p, i);
        for (std::uint32_t mis : misreports_[truth]) {
          const auto y = mech_.row_id(base + mis * divisors[i], i);
          if (!visit(i, p, static_cast<std::uint32_t>(truth), mis, x, y)) return;
        }
      }
    }
  }

 private:
  const TabulatedMechanism& mech_;
  std::vector<std::vector<std::uint32_t>> misreports_;
};

struct TripleIndex {
  std::vector<Triple> triples;
  std::unordered_map<std::uint64_t, std::uint32_t> index;

  std::uint32_t lookup(std::uint32_t o, std::uint32_t x, std::uint32_t y) const {
    return index.at(key_of(o, x, y));
  }
};

// Distinct (order, x, y) with x != y over the scope.
TripleIndex collect_triples(const TabulatedMechanism& mech, const ManipulationWalker& walker) {
  TripleIndex out;
  walker.walk([&](std::size_t, std::size_t, std::uint32_t o, std::uint32_t, std::uint32_t x,
                  std::uint32_t y) {
    if (x != y) {
      auto [it, inserted] =
          out.index.try_emplace(key_of(o, x, y), static_cast<std::uint32_t>(out.triples.size()));
      if (inserted) out.triples.push_back({o, x, y});
    }
    return true;
  });
  (void)mech;
  return out;
}

Manipulation make_manipulation(const TabulatedMechanism& mech, std::size_t agent,
                               std::size_t profile, std::uint32_t truth, std::uint32_t mis) {
  Manipulation m;
  m.agent = agent;
  m.profile_index = profile;
  m.profile = mech.profile(profile);
  m.misreport = mech.orders()[mis];
  m.local = is_neighbor(mech.orders()[truth], m.misreport);
  return m;
}

using PairTest = std::function<bool(const PreferenceOrder&, const AssignmentVector&,
                                    const AssignmentVector&)>;

CheckResult check_all(const TabulatedMechanism& mech, Scope scope, const PairTest& holds) {
  ManipulationWalker walker(mech, scope);
  TripleIndex triples = collect_triples(mech, walker);
  std::vector<char> ok(triples.triples.size(), 1);
  parallel_for(triples.triples.size(), [&](std::size_t k) {
    const auto& t = triples.triples[k];
    ok[k] = holds(mech.orders()[t.order], mech.pooled_row(t.truthful),
                  mech.pooled_row(t.misreport))
                ? 1
                : 0;
  });
  CheckResult result;
  if (std::all_of(ok.begin(), ok.end(), [](char c) { return c != 0; })) return result;
  walker.walk([&](std::size_t i, std::size_t p, std::uint32_t o, std::uint32_t mis,
                  std::uint32_t x, std::uint32_t y) {
    if (x == y || ok[triples.lookup(o, x, y)]) return true;
    result.holds = false;
    result.witness = make_manipulation(mech, i, p, o, mis);
    return false;
  });
  return result;
}

void check_discount(const Rational& r) {
  if (r <= 0 || r > 1) {
    throw std::domain_error("discount r = " + to_string(r) + " outside (0, 1]");
  }
}

}  // namespace

std::string Manipulation::describe(std::span<const std::string> names) const {
  std::string out = "agent " + std::to_string(agent) + " at profile (";
  for (std::size_t i = 0; i < profile.size(); ++i) {
    if (i) out += ", ";
    out += format_order(profile[i], names);
  }
  out += ") reports " + format_order(misreport, names);
  out += local ? " (local)" : " (non-local)";
  return out;
}

nlohmann::json Manipulation::to_json(std::span<const std::string> names) const {
  nlohmann::json orders = nlohmann::json::array();
  for (const auto& order : profile) orders.push_back(format_order(order, names));
  return {{"agent", agent},
          {"profile", orders},
          {"truth", format_order(profile.at(agent), names)},
          {"misreport", format_order(misreport, names)},
          {"local", local}};
}

CheckResult check_sd_sp(const TabulatedMechanism& mech, Scope scope) {
  return check_all(mech, scope, sd_dominates);
}

CheckResult check_ld_sp(const TabulatedMechanism& mech, Scope scope) {
  return check_all(mech, scope, ld_dominates);
}

CheckResult check_r_psp(const TabulatedMechanism& mech, const Rational& r, Scope scope) {
  check_discount(r);
  return check_all(mech, scope,
                   [&r](const PreferenceOrder& order, const AssignmentVector& x,
                        const AssignmentVector& y) { return r_discounted_dominates(order, x, y, r); });
}

DegreeResult max_degree(const TabulatedMechanism& mech, Scope scope) {
  return max_degree(mech, scope, default_degree_tolerance());
}

DegreeResult max_degree(const TabulatedMechanism& mech, Scope scope, const Rational& tolerance) {
  ManipulationWalker walker(mech, scope);
  TripleIndex triples = collect_triples(mech, walker);
  std::vector<DegreeValue> degrees(triples.triples.size());
  parallel_for(triples.triples.size(), [&](std::size_t k) {
    const auto& t = triples.triples[k];
    const auto& order = mech.orders()[t.order];
    const auto& x = mech.pooled_row(t.truthful);
    const auto& y = mech.pooled_row(t.misreport);
    degrees[k] = sd_dominates(order, x, y) ? DegreeValue::exact(1)
                                           : max_dominance_degree(order, x, y, tolerance);
  });
  DegreeResult result;
  if (degrees.empty()) return result;
  for (const auto& d : degrees) result.degree = min(result.degree, d);
  walker.walk([&](std::size_t i, std::size_t p, std::uint32_t o, std::uint32_t mis,
                  std::uint32_t x, std::uint32_t y) {
    if (x == y || degrees[triples.lookup(o, x, y)].lower != result.degree.lower) return true;
    result.binding = make_manipulation(mech, i, p, o, mis);
    return false;
  });
  return result;
}

nlohmann::json degree_to_json(const DegreeValue& value) {
  if (value.is_exact()) return to_string(value.lower);
  return nlohmann::json::array({to_string(value.lower), to_string(value.upper)});
}

nlohmann::json DegreeReport::to_json(std::span<const std::string> names) const {
  nlohmann::json out;
  out["r_local"] = degree_to_json(r_local);
  out["r_global"] = degree_to_json(r_global);
  out["binding_local"] = binding_local ? binding_local->to_json(names) : nlohmann::json();
  out["binding_global"] = binding_global ? binding_global->to_json(names) : nlohmann::json();
  out["theorem1_margin"] = to_string(theorem1_margin);
  out["theorem1_ok"] = theorem1_ok;
  return out;
}

DegreeReport verify_theorem1(const TabulatedMechanism& mech) {
  auto local = max_degree(mech, Scope::kLocal);
  auto global = max_degree(mech, Scope::kGlobal);
  DegreeReport report;
  report.r_local = local.degree;
  report.r_global = global.degree;
  report.binding_local = std::move(local.binding);
  report.binding_global = std::move(global.binding);
  report.theorem1_margin = report.r_global.lower - report.r_local.upper * report.r_local.upper;
  report.theorem1_ok = report.theorem1_margin >= 0;
  if (!report.theorem1_ok) {
    throw TheoremViolation("r_global = " + report.r_global.to_string() + " is below r_local^2 for r_local = " +
                           report.r_local.to_string());
  }
  if (report.r_global.lower > report.r_local.upper) {
    throw TheoremViolation("r_global = " + report.r_global.to_string() +
                           " exceeds r_local = " + report.r_local.to_string());
  }
  return report;
}

nlohmann::json AuditReport::to_json(std::span<const std::string> names) const {
  nlohmann::json out;
  out["r"] = to_string(r);
  out["samples_per_order"] = samples_per_order;
  out["seed"] = seed;
  out["utilities"] = utilities;
  out["pairs_certified_by_sd"] = pairs_certified;
  out["pairs_evaluated"] = pairs_evaluated;
  out["min_margin"] = min_margin ? nlohmann::json(to_string(*min_margin)) : nlohmann::json();
  out["violations"] = violations;
  if (first_violation) {
    nlohmann::json u = nlohmann::json::array();
    for (const auto& v : first_violation->utility.values) u.push_back(to_string(v));
    out["first_violation"] = {{"manipulation", first_violation->manipulation.to_json(names)},
                              {"utility", u},
                              {"margin", to_string(first_violation->margin)}};
  } else {
    out["first_violation"] = nullptr;
  }
  return out;
}

namespace {

constexpr long kRatioGrid = 1000;

// u(top) = 1, bottom = 0, each consecutive ratio drawn from (0, r] on a grid
// (strictly below 1 when r = 1, so the order stays strict).
UtilityFunction sample_urbi_utility(const PreferenceOrder& order, const Rational& r,
                                    std::mt19937_64& rng) {
  const long top = r == 1 ? kRatioGrid - 1 : kRatioGrid;
  std::uniform_int_distribution<long> step(1, top);
  UtilityFunction u{std::vector<Rational>(order.size(), Rational(0))};
  Rational value(1);
  for (std::size_t k = 0; k + 1 < order.size(); ++k) {
    u.values[order[k].index] = value;
    value *= r * fraction(step(rng), kRatioGrid);
  }
  return u;
}

}  // namespace

AuditReport sampled_utility_audit(const TabulatedMechanism& mech, const Rational& r,
                                  std::size_t samples, std::uint64_t seed) {
  check_discount(r);
  AuditReport report;
  report.r = r;
  report.samples_per_order = samples;
  report.seed = seed;

  std::mt19937_64 rng(seed);
  std::vector<std::vector<UtilityFunction>> utilities(mech.order_count());
  for (std::size_t o = 0; o < mech.order_count(); ++o) {
    const auto& order = mech.orders()[o];
    if (r < 1 && order.size() > 1) utilities[o].push_back(geometric_utility(order, r));
    for (std::size_t k = 0; k < samples; ++k) {
      auto u = sample_urbi_utility(order, r, rng);
      if (!urbi_satisfies(u, r) || !consistent(u, order)) {
        throw std::logic_error("sampled utility outside URBI(r)");
      }
      utilities[o].push_back(std::move(u));
    }
    report.utilities += utilities[o].size();
  }

  ManipulationWalker walker(mech, Scope::kGlobal);
  TripleIndex triples = collect_triples(mech, walker);
  struct Outcome {
    bool certified = false;
    std::optional<Rational> min_margin;
    std::size_t violations = 0;
    std::optional<std::size_t> first_bad;  // index into utilities[order]
  };
  std::vector<Outcome> outcomes(triples.triples.size());
  parallel_for(triples.triples.size(), [&](std::size_t k) {
    const auto& t = triples.triples[k];
    const auto& order = mech.orders()[t.order];
    const auto& x = mech.pooled_row(t.truthful);
    const auto& y = mech.pooled_row(t.misreport);
    auto& out = outcomes[k];
    if (sd_dominates(order, x, y)) {
      out.certified = true;
      return;
    }
    AssignmentVector d(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) d[j] = x[j] - y[j];
    const auto& us = utilities[t.order];
    for (std::size_t s = 0; s < us.size(); ++s) {
      Rational margin(0);
      for (std::size_t j = 0; j < d.size(); ++j) margin += us[s].values[j] * d[j];
      if (!out.min_margin || margin < *out.min_margin) out.min_margin = margin;
      if (margin < 0) {
        ++out.violations;
        if (!out.first_bad) out.first_bad = s;
      }
    }
  });

  for (const auto& out : outcomes) {
    if (out.certified) {
      ++report.pairs_certified;
      continue;
    }
    ++report.pairs_evaluated;
    report.violations += out.violations;
    if (out.min_margin && (!report.min_margin || *out.min_margin < *report.min_margin)) {
      report.min_margin = out.min_margin;
    }
  }
  if (report.violations > 0) {
    walker.walk([&](std::size_t i, std::size_t p, std::uint32_t o, std::uint32_t mis,
                    std::uint32_t x, std::uint32_t y) {
      if (x == y) return true;
      const auto& out = outcomes[triples.lookup(o, x, y)];
      if (!out.first_bad) return true;
      const auto& u = utilities[o][*out.first_bad];
      Rational margin = expected_utility(u, mech.pooled_row(x)) -
                        expected_utility(u, mech.pooled_row(y));
      report.first_violation = AuditViolation{make_manipulation(mech, i, p, o, mis), u, margin};
      return false;
    });
  }
  return report;
}

}  // namespace psp
