#pragma once

#include <stdexcept>
#include <string>

namespace nehari {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Two fields that must share a grid do not.
class GridMismatchError : public Error {
 public:
  using Error::Error;
};

/// The discrete Riesz system is not positive definite.
class SolverFailure : public Error {
 public:
  using Error::Error;
};

/// A scalar equation has no admissible root.
class NoRootError : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// A NehariPoint whose constraint residual is no longer within tolerance.
class StalePointError : public Error {
 public:
  using Error::Error;
};

/// The initial mountain-pass path does not climb above both endpoints.
class GeometryViolation : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace nehari
