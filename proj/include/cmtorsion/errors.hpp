#pragma once

#include <stdexcept>
#include <string>

namespace cmt {

/// Operation called outside its mathematical domain (mismatched orders,
/// invalid discriminant, out-of-range dimensions, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class DivisionByZero : public DomainError {
 public:
  using DomainError::DomainError;
};

/// A matrix expected to have full row rank does not.
class RankError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Finite intersection requested for subgroups with a positive-dimensional
/// intersection.
class DimensionError : public DomainError {
 public:
  using DomainError::DomainError;
};

class PreconditionError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Bound parameters outside the validity range of a theorem. The message
/// names the violated inequality.
class RangeError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Malformed textual or JSON input.
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what, int line = 0)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  [[nodiscard]] int line() const noexcept { return line_; }

 private:
  int line_;
};

class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace cmt
