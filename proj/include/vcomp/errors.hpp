#pragma once

#include <stdexcept>
#include <string>

namespace vcomp {

// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Operand dimensions do not fit together.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// A value violates a documented invariant (trace, hermiticity, probabilities).
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Matrix expected to be positive semidefinite has a significantly negative eigenvalue.
class NotPsdError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// Requested object would exceed the configured dimension guard.
class ResourceGuardError : public Error {
 public:
  using Error::Error;
};

// Malformed input file.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace vcomp
