#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace racetrace {

/// Malformed text input. Line and column are 1-based.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& message)
      : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
        line_(line),
        column_(column),
        detail_(message) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }
  const std::string& detail() const { return detail_; }

 private:
  std::size_t line_;
  std::size_t column_;
  std::string detail_;
};

/// An operation was called outside its precondition (invalid trace, unknown
/// event, tag never received, pair outside a race set, ...).
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A program failed its static checks (unknown function, arity mismatch,
/// unbound variable, non-linear pattern).
class ProgramError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The simulator was asked to do something the program state does not allow,
/// or a program evaluated to an ill-typed send.
class SimulationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace racetrace
