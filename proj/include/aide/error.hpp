#pragma once

#include <stdexcept>
#include <string>

namespace aide {

// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad user input: malformed files, dimension mismatches, unknown ids,
// violated preconditions. Maps to CLI exit code 2.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

// Numerical failure: solver breakdown, retrain non-convergence, undefined
// statistics. Maps to CLI exit code 3.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace aide
