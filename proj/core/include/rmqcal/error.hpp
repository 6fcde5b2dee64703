#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rmqcal {

/// Violated operation precondition (bad index set, dimension mismatch, empty input).
class PreconditionError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Input that is well-formed but outside the supported domain.
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// Malformed input file. `row()` is 1-based; 0 when not row-specific.
class ParseError : public std::runtime_error {
public:
  ParseError(const std::string& message, std::size_t row = 0)
      : std::runtime_error(row == 0 ? message : "row " + std::to_string(row) + ": " + message),
        row_(row) {}

  std::size_t row() const noexcept { return row_; }

private:
  std::size_t row_;
};

/// An iterative numerical routine failed to reach its tolerance.
class ConvergenceError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace rmqcal
