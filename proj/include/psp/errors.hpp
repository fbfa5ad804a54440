#pragma once

#include <stdexcept>
#include <string>

namespace psp {

/// Input text that does not follow one of the library's textual formats.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Structurally well-formed input that violates a model invariant
/// (infeasible assignment, incomplete table, ...).
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Exhaustive enumeration would exceed the configured size guard.
class EnumerationLimitError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A geometric operation was asked for something that does not exist,
/// e.g. the transition time of a pair that never swaps.
class NoSolutionError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A proven statement failed to hold on concrete data. Always a bug.
class TheoremViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Two independent evaluation routes disagreed. Always a bug.
class CrossCheckFailure : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A search ran out of its budget before finding what it was looking for.
class BudgetExhausted : public std::runtime_error {
 public:
  BudgetExhausted(const std::string& what, std::string last_scanned)
      : std::runtime_error(what), last_scanned_(std::move(last_scanned)) {}
  const std::string& last_scanned() const { return last_scanned_; }

 private:
  std::string last_scanned_;
};

}  // namespace psp
