#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tibpalm {

// Invalid numeric input (non-finite entries, zero matrices where forbidden).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A point outside the interior of a geometry's or function's domain.
class DomainError : public std::domain_error {
 public:
  DomainError(const std::string& what, std::ptrdiff_t coordinate = -1)
      : std::domain_error(what), coordinate_(coordinate) {}

  std::ptrdiff_t coordinate() const { return coordinate_; }

 private:
  std::ptrdiff_t coordinate_;
};

// Malformed text input; line and column are 1-based, 0 when not applicable.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column)
      : std::runtime_error(what + " (line " + std::to_string(line) + ", column " +
                           std::to_string(column) + ")"),
        line_(line),
        column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

// Inconsistent solver/benchmark configuration detected before a run starts.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// An inner iterative solver stopped at its iteration cap.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}

  double residual() const { return residual_; }

 private:
  double residual_;
};

// A block subproblem could not be solved during iteration.
class SolverFault : public std::runtime_error {
 public:
  SolverFault(const std::string& block, long iteration, const std::string& what)
      : std::runtime_error("block " + block + ", iteration " + std::to_string(iteration) +
                           ": " + what),
        block_(block),
        iteration_(iteration) {}

  const std::string& block() const { return block_; }
  long iteration() const { return iteration_; }

 private:
  std::string block_;
  long iteration_;
};

}  // namespace tibpalm
