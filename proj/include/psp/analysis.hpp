#pragma once

// Mechanism-level incentive checks over every (agent, profile, misreport).
//
// Manipulations are enumerated agent first, then profile index, then the
// misreport's order index, and every reported witness is the first violation
// in that order, whatever the worker count (PSP_WORKERS).

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "psp/assign.hpp"
#include "psp/dominance.hpp"

namespace psp {

enum class Scope { kGlobal, kLocal };

struct Manipulation {
  std::size_t agent = 0;
  std::size_t profile_index = 0;
  PreferenceProfile profile;  // truthful
  PreferenceOrder misreport;
  bool local = false;

  std::string describe(std::span<const std::string> names) const;
  nlohmann::json to_json(std::span<const std::string> names) const;
};

struct CheckResult {
  bool holds = true;
  std::optional<Manipulation> witness;

  explicit operator bool() const { return holds; }
};

CheckResult check_sd_sp(const TabulatedMechanism& mech, Scope scope = Scope::kGlobal);
CheckResult check_ld_sp(const TabulatedMechanism& mech, Scope scope = Scope::kGlobal);

/// Throws std::domain_error unless 0 < r <= 1.
CheckResult check_r_psp(const TabulatedMechanism& mech, const Rational& r,
                        Scope scope = Scope::kGlobal);

struct DegreeResult {
  DegreeValue degree = DegreeValue::exact(1);
  /// First manipulation whose lower bracket equals degree.lower; empty when
  /// nothing binds (no misreport changes the outcome).
  std::optional<Manipulation> binding;
};

DegreeResult max_degree(const TabulatedMechanism& mech, Scope scope = Scope::kGlobal);
DegreeResult max_degree(const TabulatedMechanism& mech, Scope scope, const Rational& tolerance);

struct DegreeReport {
  DegreeValue r_local;
  DegreeValue r_global;
  std::optional<Manipulation> binding_local;
  std::optional<Manipulation> binding_global;
  /// r_global.lower - r_local.upper^2, a lower bound on the true margin.
  Rational theorem1_margin;
  bool theorem1_ok = false;

  nlohmann::json to_json(std::span<const std::string> names) const;
};

/// Measures both degrees and checks r_local^2 <= r_global <= r_local using
/// the sound ends of the brackets. Throws TheoremViolation otherwise.
DegreeReport verify_theorem1(const TabulatedMechanism& mech);

struct AuditViolation {
  Manipulation manipulation;
  UtilityFunction utility;
  Rational margin;  // truthful minus misreport expected utility, negative
};

struct AuditReport {
  Rational r;
  std::size_t samples_per_order = 0;
  std::uint64_t seed = 0;
  std::size_t utilities = 0;          // distinct sampled utilities
  std::size_t pairs_certified = 0;    // distinct (order, x, y) settled by SD
  std::size_t pairs_evaluated = 0;    // distinct (order, x, y) evaluated per sample
  std::optional<Rational> min_margin;
  std::size_t violations = 0;         // violating (pair, utility) combinations
  std::optional<AuditViolation> first_violation;

  nlohmann::json to_json(std::span<const std::string> names) const;
};

/// Draws `samples` utilities per truthful order from URBI(r) normalized to
/// [0, 1] (plus geometric_utility(P, r) when r < 1) and compares truthful and
/// misreport expected utility for every manipulation. Throws
/// std::domain_error unless 0 < r <= 1.
AuditReport sampled_utility_audit(const TabulatedMechanism& mech, const Rational& r,
                                  std::size_t samples, std::uint64_t seed);

/// Worker threads used by the analysis: PSP_WORKERS if set, otherwise the
/// hardware concurrency.
std::size_t worker_count();

/// JSON for a bracket: "p/q" when exact, ["lo", "hi"] otherwise.
nlohmann::json degree_to_json(const DegreeValue& value);

}  // namespace psp
