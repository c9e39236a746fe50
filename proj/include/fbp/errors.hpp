#pragma once

#include <stdexcept>
#include <string>

namespace fbp {

// Precondition violations use std::invalid_argument; the types below carry
// the categories the CLI maps onto exit codes.

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace fbp
