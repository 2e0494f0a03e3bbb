#pragma once

#include <stdexcept>
#include <string>

namespace vorwave {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the domain of a function (psi outside [0,m], lambda too small, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A numerical procedure could not deliver its result (bracketing, quadrature).
class NumericError : public Error {
 public:
  using Error::Error;
};

/// h_p <= 0 somewhere, i.e. u = -1/h_p would not be negative.
class StagnationError : public Error {
 public:
  using Error::Error;
};

class NoConvergenceError : public NumericError {
 public:
  using NumericError::NumericError;
};

class NotFoundError : public NumericError {
 public:
  using NumericError::NumericError;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace vorwave
