#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace maxwin {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Quadrature did not reach its tolerance within the evaluation budget.
/// Carries the best estimate obtained so far.
class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& what, double partial_value, double abs_err)
      : std::runtime_error(what), partial_value_(partial_value), abs_err_(abs_err) {}

  double partial_value() const noexcept { return partial_value_; }
  double abs_err() const noexcept { return abs_err_; }

 private:
  double partial_value_;
  double abs_err_;
};

/// Malformed input record; `line()` is 1-based and counts the header.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace maxwin
