#pragma once

#include <stdexcept>
#include <string>

namespace slq {

// Input file could not be parsed; carries the 1-based line number.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, long line)
      : std::runtime_error(what + " (line " + std::to_string(line) + ")"),
        line_(line) {}
  long line() const { return line_; }

 private:
  long line_;
};

// Operator shape or block structure does not match what the algorithm needs
// (e.g. a partial-Rademacher estimator applied to a non-Jordan-Wielandt matrix).
class StructureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Arithmetic produced a non-finite value or an iteration failed to converge.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace slq
