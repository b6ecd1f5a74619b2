#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace termflow {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Syntax and well-formedness errors raised while reading the DSL. Line and
// column are 1-based; 0 means "no source position" (e.g. a programmatic
// constructor rejected the value).
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t line, std::size_t column);

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  std::string detail_;
  std::size_t line_;
  std::size_t column_;
};

// A value violates a structural invariant (arity, scoping, reserved names).
class WellFormednessError : public Error {
 public:
  using Error::Error;
};

class EvalError : public Error {
 public:
  using Error::Error;
};

// An operation was called outside its domain (non-FNF input, n < v, r != 1, ...).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// The closed-form size of an exhaustive search exceeds the configured budget.
// `required` saturates at UINT64_MAX.
class BudgetExceeded : public Error {
 public:
  BudgetExceeded(const std::string& what, std::uint64_t required, std::uint64_t limit);

  std::uint64_t required() const noexcept { return required_; }
  std::uint64_t limit() const noexcept { return limit_; }

 private:
  std::uint64_t required_;
  std::uint64_t limit_;
};

}  // namespace termflow
