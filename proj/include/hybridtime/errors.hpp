#pragma once

#include <stdexcept>
#include <string>

namespace hybridtime {

// Bad input data: malformed files, non-physical measurements, schema violations.
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Numeric failure: Lambert branch domain, missing root bracket, non-convergence.
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace hybridtime
