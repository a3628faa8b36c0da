#pragma once

#include <stdexcept>
#include <string>

namespace pgplan {

// Bad inputs: unknown ids, malformed graphs, domain violations.
struct InputError : std::runtime_error {
  explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

// A solver ran out of its node budget; callers turn this into an
// "inconclusive" outcome.
struct BudgetExceeded : std::runtime_error {
  explicit BudgetExceeded(const std::string& what) : std::runtime_error(what) {}
};

// Syntax errors in the stipulation language; message carries the position.
struct ParseError : std::runtime_error {
  ParseError(const std::string& what, std::size_t position)
      : std::runtime_error(what + " (at position " + std::to_string(position) + ")"),
        position(position) {}
  std::size_t position;
};

}  // namespace pgplan
