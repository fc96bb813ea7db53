#pragma once

#include <stdexcept>
#include <string>

namespace diamag {

// Precondition or configuration violation (CLI exit code 1).
struct ValidationError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Non-finite result, solver failure (CLI exit code 2).
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Size or cost cap exceeded (CLI exit code 3).
struct ResourceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw ValidationError(msg);
}

}  // namespace diamag
