#pragma once

#include <stdexcept>
#include <string>

namespace eigenorient {

/// Malformed input file. Carries the 1-based line and column (field index)
/// where reading broke down.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string message, int line, int column)
      : std::runtime_error(std::move(message)), line_(line), column_(column) {}

  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  int line_;
  int column_;
};

/// Numeric failure: degenerate columns, antipodal cancellation,
/// eigensolver non-convergence, vanishing scales.
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& message)
      : std::runtime_error(message) {}
};

}  // namespace eigenorient
