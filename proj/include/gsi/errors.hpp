#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gsi {

// Malformed input text. Carries the 1-based line number (0 when unknown).
class ParseError : public std::runtime_error {
public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

// A model or call violates a documented precondition/invariant
// (chain mismatch, domain mismatch, not a fixpoint, ...).
class InvariantError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// Something the theory guarantees did not happen. Always a bug.
class SoundnessError : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

// Enumeration-based oracles refuse to run past their size guard.
class CapacityError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace gsi
