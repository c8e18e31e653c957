#pragma once

#include <stdexcept>
#include <string>

namespace orthokit {

// Base of every error the library raises. Callers that only need a
// diagnostic can catch this; the subclasses exist so the CLI and tests can
// tell precondition failures apart from arithmetic obstructions.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

class SingularMatrixError : public Error {
 public:
  using Error::Error;
};

// Raised by elimination over Z/p^N when no unit pivot is available.
class NonUnitPivotError : public Error {
 public:
  using Error::Error;
};

class FactorizationError : public Error {
 public:
  using Error::Error;
};

}  // namespace orthokit
