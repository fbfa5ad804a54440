#include "psp/assign.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "psp/errors.hpp"

namespace psp {

Setting Setting::unit(std::size_t n, std::size_t m) {
  return Setting{n, m, std::vector<std::uint32_t>(m, 1)};
}

Setting Setting::covering(std::size_t n, std::size_t m) {
  auto cap = static_cast<std::uint32_t>(m == 0 ? 1 : (n + m - 1) / m);
  return Setting{n, m, std::vector<std::uint32_t>(m, std::max<std::uint32_t>(cap, 1))};
}

void Setting::validate() const {
  if (n < 1 || m < 1) throw ValidationError("setting needs at least one agent and one object");
  if (q.size() != m) {
    throw ValidationError("capacity vector has " + std::to_string(q.size()) +
                          " entries, expected " + std::to_string(m));
  }
  std::size_t total = 0;
  for (auto c : q) {
    if (c == 0) throw ValidationError("capacities must be positive");
    total += c;
  }
  if (n > total) {
    throw ValidationError("more agents (" + std::to_string(n) + ") than units (" +
                          std::to_string(total) + "); add a dummy object");
  }
}

Rational UtilityFunction::min_value() const {
  if (values.empty()) throw std::invalid_argument("empty utility function");
  return *std::min_element(values.begin(), values.end());
}

std::string MatrixViolation::describe() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::kNegativeEntry:
      os << "negative entry x[" << agent << "][" << object << "] = " << value;
      break;
    case Kind::kEntryAboveOne:
      os << "entry above one x[" << agent << "][" << object << "] = " << value;
      break;
    case Kind::kRowSum:
      os << "row " << agent << " sums to " << value << " instead of 1";
      break;
    case Kind::kCapacity:
      os << "object " << object << " assigned " << value << " units beyond its capacity";
      break;
  }
  return os.str();
}

std::string ValidationReport::describe() const {
  std::string out;
  for (const auto& v : violations) {
    if (!out.empty()) out += "; ";
    out += v.describe();
  }
  return out.empty() ? "feasible" : out;
}

ValidationReport validate_matrix(const AssignmentMatrix& x, const Setting& setting) {
  if (x.size() != setting.n || setting.q.size() != setting.m) {
    throw ValidationError("assignment matrix has " + std::to_string(x.size()) +
                          " rows, expected " + std::to_string(setting.n));
  }
  ValidationReport report;
  using Kind = MatrixViolation::Kind;
  std::vector<Rational> column(setting.m, Rational(0));
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i].size() != setting.m) {
      throw ValidationError("row " + std::to_string(i) + " has " + std::to_string(x[i].size()) +
                            " entries, expected " + std::to_string(setting.m));
    }
    Rational sum(0);
    for (std::size_t j = 0; j < setting.m; ++j) {
      const auto& v = x[i][j];
      if (v < 0) report.violations.push_back({Kind::kNegativeEntry, i, j, v});
      if (v > 1) report.violations.push_back({Kind::kEntryAboveOne, i, j, v});
      sum += v;
      column[j] += v;
    }
    if (sum != 1) report.violations.push_back({Kind::kRowSum, i, 0, sum});
  }
  for (std::size_t j = 0; j < setting.m; ++j) {
    if (column[j] > setting.q[j]) {
      report.violations.push_back({Kind::kCapacity, 0, j, column[j]});
    }
  }
  return report;
}

Rational expected_utility(const UtilityFunction& u, const AssignmentVector& x) {
  if (u.size() != x.size()) {
    throw std::invalid_argument("expected_utility: utility and assignment sizes differ");
  }
  Rational total(0);
  for (std::size_t j = 0; j < x.size(); ++j) total += u.values[j] * x[j];
  return total;
}

// --- TabulatedMechanism ----------------------------------------------------

std::size_t checked_profile_count(const Setting& setting) {
  if (setting.m < 1 || setting.m > kMaxEnumeratedObjects) {
    throw EnumerationLimitError("object count " + std::to_string(setting.m) +
                                " outside the enumeration guard");
  }
  const std::size_t f = factorial(setting.m);
  std::size_t total = 1;
  for (std::size_t i = 0; i < setting.n; ++i) {
    if (total > kMaxTableProfiles / f) {
      throw EnumerationLimitError("table for n = " + std::to_string(setting.n) +
                                  ", m = " + std::to_string(setting.m) + " exceeds " +
                                  std::to_string(kMaxTableProfiles) + " profiles");
    }
    total *= f;
  }
  return total;
}

std::size_t TabulatedMechanism::report(std::size_t profile, std::size_t agent) const {
  std::size_t divisor = 1;
  for (std::size_t i = agent + 1; i < setting_.n; ++i) divisor *= orders_.size();
  return (profile / divisor) % orders_.size();
}

std::size_t TabulatedMechanism::with_report(std::size_t profile, std::size_t agent,
                                            std::size_t order) const {
  std::size_t divisor = 1;
  for (std::size_t i = agent + 1; i < setting_.n; ++i) divisor *= orders_.size();
  const std::size_t current = (profile / divisor) % orders_.size();
  return profile + (order - current) * divisor;  // wraps correctly for order < current
}

std::size_t TabulatedMechanism::profile_index(const PreferenceProfile& profile) const {
  if (profile.size() != setting_.n) {
    throw std::invalid_argument("profile has the wrong number of agents");
  }
  std::size_t index = 0;
  for (const auto& order : profile) {
    if (order.size() != setting_.m) throw std::invalid_argument("order has wrong size");
    index = index * orders_.size() + order_index(order);
  }
  return index;
}

PreferenceProfile TabulatedMechanism::profile(std::size_t index) const {
  PreferenceProfile out(setting_.n);
  for (std::size_t i = setting_.n; i-- > 0;) {
    out[i] = orders_[index % orders_.size()];
    index /= orders_.size();
  }
  return out;
}

AssignmentMatrix TabulatedMechanism::matrix(std::size_t profile) const {
  AssignmentMatrix x;
  x.reserve(setting_.n);
  for (std::size_t i = 0; i < setting_.n; ++i) x.push_back(row(profile, i));
  return x;
}

TabulatedMechanism TabulatedMechanism::with_row(std::size_t profile, std::size_t agent,
                                                const AssignmentVector& row) const {
  TabulatedMechanism copy = *this;
  auto it = std::find(copy.pool_.begin(), copy.pool_.end(), row);
  RowId id;
  if (it == copy.pool_.end()) {
    id = static_cast<RowId>(copy.pool_.size());
    copy.pool_.push_back(row);
  } else {
    id = static_cast<RowId>(it - copy.pool_.begin());
  }
  copy.cells_[profile * setting_.n + agent] = id;
  return copy;
}

bool operator==(const TabulatedMechanism& a, const TabulatedMechanism& b) {
  if (a.setting_ != b.setting_ || a.names_ != b.names_) return false;
  for (std::size_t p = 0; p < a.profile_count_; ++p) {
    for (std::size_t i = 0; i < a.setting_.n; ++i) {
      if (a.row(p, i) != b.row(p, i)) return false;
    }
  }
  return true;
}

bool TabulatedMechanism::Assembler::RowLess::operator()(const AssignmentVector& a,
                                                        const AssignmentVector& b) const {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

TabulatedMechanism::Assembler::Assembler(Setting setting, std::vector<std::string> names)
    : mech_(new TabulatedMechanism()) {
  setting.validate();
  if (names.size() != setting.m) {
    throw ValidationError("expected " + std::to_string(setting.m) + " object names, got " +
                          std::to_string(names.size()));
  }
  auto sorted = names;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw ValidationError("object names must be distinct");
  }
  mech_->profile_count_ = checked_profile_count(setting);
  mech_->orders_ = all_preference_orders(setting.m);
  mech_->setting_ = std::move(setting);
  mech_->names_ = std::move(names);
  mech_->cells_.assign(mech_->profile_count_ * mech_->setting_.n, 0);
  filled_.assign(mech_->profile_count_, false);
}

const std::vector<PreferenceOrder>& TabulatedMechanism::Assembler::orders() const {
  return mech_->orders_;
}
std::size_t TabulatedMechanism::Assembler::profile_count() const { return mech_->profile_count_; }
PreferenceProfile TabulatedMechanism::Assembler::profile(std::size_t index) const {
  return mech_->profile(index);
}
std::size_t TabulatedMechanism::Assembler::profile_index(const PreferenceProfile& p) const {
  return mech_->profile_index(p);
}
bool TabulatedMechanism::Assembler::has(std::size_t profile) const { return filled_[profile]; }

namespace {

std::string profile_label(const TabulatedMechanism::Assembler& a, std::size_t index,
                          const std::vector<std::string>& names) {
  std::string out = "[";
  auto profile = a.profile(index);
  for (std::size_t i = 0; i < profile.size(); ++i) {
    if (i) out += ", ";
    out += format_order(profile[i], names);
  }
  return out + "]";
}

}  // namespace

void TabulatedMechanism::Assembler::set(std::size_t profile, const AssignmentMatrix& matrix) {
  if (profile >= mech_->profile_count_) throw std::out_of_range("profile index out of range");
  if (filled_[profile]) {
    throw ValidationError("duplicate entry for profile " +
                          profile_label(*this, profile, mech_->names_));
  }
  auto report = validate_matrix(matrix, mech_->setting_);
  if (!report.feasible()) {
    throw ValidationError("infeasible assignment for profile " +
                          profile_label(*this, profile, mech_->names_) + ": " +
                          report.describe());
  }
  for (std::size_t i = 0; i < matrix.size(); ++i) {
    auto [it, inserted] = index_.try_emplace(matrix[i], static_cast<RowId>(mech_->pool_.size()));
    if (inserted) mech_->pool_.push_back(matrix[i]);
    mech_->cells_[profile * mech_->setting_.n + i] = it->second;
  }
  filled_[profile] = true;
}

TabulatedMechanism TabulatedMechanism::Assembler::finish() && {
  for (std::size_t p = 0; p < filled_.size(); ++p) {
    if (!filled_[p]) {
      throw ValidationError("incomplete table: missing profile " +
                            profile_label(*this, p, mech_->names_));
    }
  }
  return std::move(*mech_);
}

TabulatedMechanism TabulatedMechanism::tabulate(Setting setting, std::vector<std::string> names,
                                                const Rule& rule) {
  Assembler assembler(std::move(setting), std::move(names));
  for (std::size_t p = 0; p < assembler.profile_count(); ++p) {
    assembler.set(p, rule(assembler.profile(p)));
  }
  return std::move(assembler).finish();
}

// --- corpus mechanisms -----------------------------------------------------

namespace {

void check_corpus_guard(const Setting& setting, const char* what) {
  setting.validate();
  if (setting.n > kMaxCorpusAgents || setting.m > kMaxCorpusObjects) {
    throw EnumerationLimitError(std::string(what) + " is limited to n, m <= " +
                                std::to_string(kMaxCorpusAgents));
  }
  checked_profile_count(setting);
}

void check_profile(const Setting& setting, const PreferenceProfile& profile) {
  if (profile.size() != setting.n) throw std::invalid_argument("profile size mismatch");
  for (const auto& order : profile) {
    if (order.size() != setting.m) throw std::invalid_argument("order size mismatch");
  }
}

}  // namespace

AssignmentMatrix random_serial_dictatorship(const Setting& setting,
                                            const PreferenceProfile& profile) {
  check_profile(setting, profile);
  const auto n = setting.n, m = setting.m;
  std::vector<std::vector<std::size_t>> counts(n, std::vector<std::size_t>(m, 0));
  std::vector<std::size_t> priority(n);
  std::iota(priority.begin(), priority.end(), 0);
  std::size_t orders = 0;
  do {
    std::vector<std::uint32_t> left = setting.q;
    for (auto agent : priority) {
      for (std::size_t k = 0; k < m; ++k) {
        auto j = profile[agent][k].index;
        if (left[j] > 0) {
          --left[j];
          ++counts[agent][j];
          break;
        }
      }
    }
    ++orders;
  } while (std::next_permutation(priority.begin(), priority.end()));
  AssignmentMatrix x(n, AssignmentVector(m));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      x[i][j] = fraction(static_cast<long>(counts[i][j]), static_cast<long>(orders));
      x[i][j].canonicalize();
    }
  }
  return x;
}

AssignmentMatrix probabilistic_serial(const Setting& setting, const PreferenceProfile& profile) {
  check_profile(setting, profile);
  const auto n = setting.n, m = setting.m;
  std::vector<Rational> supply(m);
  for (std::size_t j = 0; j < m; ++j) supply[j] = setting.q[j];
  AssignmentMatrix x(n, AssignmentVector(m, Rational(0)));
  Rational clock(0);
  std::vector<std::size_t> eating(n);
  std::vector<std::size_t> eaters(m);
  while (clock < 1) {
    std::fill(eaters.begin(), eaters.end(), 0);
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t k = 0;
      while (supply[profile[i][k].index] == 0) ++k;  // n <= sum(q) keeps some supply
      eating[i] = profile[i][k].index;
      ++eaters[eating[i]];
    }
    Rational step = 1 - clock;
    for (std::size_t j = 0; j < m; ++j) {
      if (eaters[j] > 0) {
        Rational until_gone = supply[j] / static_cast<unsigned long>(eaters[j]);
        if (until_gone < step) step = until_gone;
      }
    }
    for (std::size_t i = 0; i < n; ++i) x[i][eating[i]] += step;
    for (std::size_t j = 0; j < m; ++j) {
      if (eaters[j] > 0) supply[j] -= step * static_cast<unsigned long>(eaters[j]);
    }
    clock += step;
  }
  return x;
}

TabulatedMechanism tabulate_rsd(const Setting& setting) {
  check_corpus_guard(setting, "random serial dictatorship");
  return TabulatedMechanism::tabulate(
      setting, default_object_names(setting.m),
      [&](const PreferenceProfile& p) { return random_serial_dictatorship(setting, p); });
}

TabulatedMechanism tabulate_ps(const Setting& setting) {
  check_corpus_guard(setting, "probabilistic serial");
  return TabulatedMechanism::tabulate(
      setting, default_object_names(setting.m),
      [&](const PreferenceProfile& p) { return probabilistic_serial(setting, p); });
}

}  // namespace psp
