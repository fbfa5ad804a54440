#pragma once

// Settings, random assignments and tabulated mechanisms.

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "psp/prefs.hpp"
#include "psp/rational.hpp"

namespace psp {

/// (n, m, q): agent count, object count, per-object capacities.
struct Setting {
  std::size_t n = 0;
  std::size_t m = 0;
  std::vector<std::uint32_t> q;

  /// Unit capacities, q = (1, ..., 1).
  static Setting unit(std::size_t n, std::size_t m);

  /// Smallest uniform capacity ceil(n/m) covering all agents.
  static Setting covering(std::size_t n, std::size_t m);

  /// Throws ValidationError unless n, m >= 1, q has m positive entries and
  /// n <= sum(q).
  void validate() const;

  friend bool operator==(const Setting&, const Setting&) = default;
};

/// One agent's lottery over objects, indexed by ObjectId::index.
using AssignmentVector = std::vector<Rational>;

/// One row per agent.
using AssignmentMatrix = std::vector<AssignmentVector>;

/// Non-negative value per object.
struct UtilityFunction {
  std::vector<Rational> values;

  std::size_t size() const { return values.size(); }
  const Rational& operator()(ObjectId j) const { return values[j.index]; }
  Rational min_value() const;
};

struct MatrixViolation {
  enum class Kind { kNegativeEntry, kEntryAboveOne, kRowSum, kCapacity };
  Kind kind;
  std::size_t agent = 0;   // unused for kCapacity
  std::size_t object = 0;  // unused for kRowSum
  Rational value;          // the offending entry / sum

  std::string describe() const;
};

struct ValidationReport {
  std::vector<MatrixViolation> violations;
  bool feasible() const { return violations.empty(); }
  std::string describe() const;
};

/// Every violated non-negativity, row-sum or capacity constraint. Throws
/// ValidationError if the matrix is not n x m.
ValidationReport validate_matrix(const AssignmentMatrix& x, const Setting& setting);

/// sum_j u(j) * x_j. Throws std::invalid_argument on size mismatch.
Rational expected_utility(const UtilityFunction& u, const AssignmentVector& x);

/// Upper bound on the number of profiles a table may hold.
inline constexpr std::size_t kMaxTableProfiles = 2'000'000;

/// A mechanism given as a total table from preference profiles to
/// assignment matrices.
///
/// Profiles are indexed lexicographically: agent 0's order index is the most
/// significant digit in base m!. Distinct assignment vectors are interned in a
/// pool, so each table cell is a small row id; all analysis code keys its
/// caches on those ids.
class TabulatedMechanism {
 public:
  using RowId = std::uint32_t;
  using Rule = std::function<AssignmentMatrix(const PreferenceProfile&)>;

  /// Evaluates `rule` on every profile and validates each matrix. Throws
  /// EnumerationLimitError past kMaxTableProfiles and ValidationError (naming
  /// the profile) on infeasible output.
  static TabulatedMechanism tabulate(Setting setting, std::vector<std::string> names,
                                     const Rule& rule);

  const Setting& setting() const { return setting_; }
  std::size_t agents() const { return setting_.n; }
  std::size_t objects() const { return setting_.m; }
  const std::vector<std::string>& names() const { return names_; }

  /// All m! orders; order ids index into this.
  const std::vector<PreferenceOrder>& orders() const { return orders_; }
  std::size_t order_count() const { return orders_.size(); }
  std::size_t profile_count() const { return profile_count_; }

  std::size_t report(std::size_t profile, std::size_t agent) const;
  std::size_t with_report(std::size_t profile, std::size_t agent, std::size_t order) const;
  std::size_t profile_index(const PreferenceProfile& profile) const;
  PreferenceProfile profile(std::size_t index) const;

  RowId row_id(std::size_t profile, std::size_t agent) const {
    return cells_[profile * setting_.n + agent];
  }
  const AssignmentVector& row(std::size_t profile, std::size_t agent) const {
    return pool_[row_id(profile, agent)];
  }
  const AssignmentVector& pooled_row(RowId id) const { return pool_[id]; }
  std::size_t pool_size() const { return pool_.size(); }
  AssignmentMatrix matrix(std::size_t profile) const;

  /// Copy with one cell replaced; used to build negative controls.
  TabulatedMechanism with_row(std::size_t profile, std::size_t agent,
                              const AssignmentVector& row) const;

  friend bool operator==(const TabulatedMechanism& a, const TabulatedMechanism& b);

  /// Incremental construction, one profile at a time in any order.
  class Assembler {
   public:
    Assembler(Setting setting, std::vector<std::string> names);

    /// Validates and stores the matrix for `profile`. Throws ValidationError
    /// naming the profile if infeasible or already set.
    void set(std::size_t profile, const AssignmentMatrix& matrix);
    bool has(std::size_t profile) const;

    /// Throws ValidationError ("incomplete table") if any profile is missing.
    TabulatedMechanism finish() &&;

    const std::vector<PreferenceOrder>& orders() const;
    std::size_t profile_count() const;
    PreferenceProfile profile(std::size_t index) const;
    std::size_t profile_index(const PreferenceProfile& profile) const;

   private:
    struct RowLess {
      bool operator()(const AssignmentVector& a, const AssignmentVector& b) const;
    };
    std::unique_ptr<TabulatedMechanism> mech_;
    std::vector<bool> filled_;
    std::map<AssignmentVector, RowId, RowLess> index_;
  };

 private:
  TabulatedMechanism() = default;

  Setting setting_;
  std::vector<std::string> names_;
  std::vector<PreferenceOrder> orders_;
  std::size_t profile_count_ = 0;
  std::vector<AssignmentVector> pool_;
  std::vector<RowId> cells_;
};

/// Profile count (m!)^n, or throws EnumerationLimitError past the table guard.
std::size_t checked_profile_count(const Setting& setting);

/// Largest n and m accepted by the corpus generators.
inline constexpr std::size_t kMaxCorpusAgents = 5;
inline constexpr std::size_t kMaxCorpusObjects = 5;

/// Random serial dictatorship: uniform average over all n! priority orders of
/// the serial-dictatorship outcome.
TabulatedMechanism tabulate_rsd(const Setting& setting);

/// Probabilistic serial: simultaneous eating at unit speed, exact breakpoints.
TabulatedMechanism tabulate_ps(const Setting& setting);

/// The single assignment matrix produced by serial dictatorship / eating for
/// one profile. Exposed for tests.
AssignmentMatrix random_serial_dictatorship(const Setting& setting,
                                            const PreferenceProfile& profile);
AssignmentMatrix probabilistic_serial(const Setting& setting, const PreferenceProfile& profile);

}  // namespace psp
