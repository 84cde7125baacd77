#pragma once

#include <stdexcept>
#include <string>

namespace ahm {

// Error taxonomy shared by the library and the CLI exit-code contract
// (0 pass, 1 violation, 2 config error, 3 runtime error).
class Error : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Incompatible structures: wrong dimension, wrong space kind, mismatched handles.
class StructuralError : public Error {
  using Error::Error;
};

// A parameter outside its mathematical domain (lambda not in [0,1], beta not in (0,1), ...).
class DomainError : public Error {
  using Error::Error;
};

// The operation needs a capability the object does not declare (e.g. no convexity modulus).
class CapabilityError : public Error {
  using Error::Error;
};

// A constructed object violates one of its declared invariants.
class ValidationError : public Error {
  using Error::Error;
};

// Exact arithmetic could not complete: resource guard hit or a ceiling that
// could not be certified. Never silently wraps or truncates.
class ArithmeticFailure : public Error {
  using Error::Error;
};

}  // namespace ahm
