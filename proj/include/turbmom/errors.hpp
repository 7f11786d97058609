#pragma once

#include <stdexcept>
#include <string>

namespace turbmom {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Bad user input: out-of-range parameter, malformed request.
class InvalidArgumentError : public Error {
public:
  using Error::Error;
};

/// Operands live on incompatible grids.
class DimensionError : public Error {
public:
  using Error::Error;
};

/// Spectrum evaluated at a point where it diverges.
class SingularityError : public Error {
public:
  using Error::Error;
};

/// A quadrature failed to reach the requested tolerance.
class ConvergenceError : public Error {
public:
  ConvergenceError(const std::string& what, double error_estimate)
      : Error(what), error_estimate_(error_estimate) {}
  double error_estimate() const { return error_estimate_; }

private:
  double error_estimate_;
};

/// A numerical invariant (unitarity, hermiticity) drifted beyond tolerance.
class IntegrityError : public Error {
public:
  using Error::Error;
};

/// Propagation interval with z < z0.
class InvalidIntervalError : public InvalidArgumentError {
public:
  using InvalidArgumentError::InvalidArgumentError;
};

/// Spectrum variant unusable for the requested operation.
class InvalidModelError : public InvalidArgumentError {
public:
  using InvalidArgumentError::InvalidArgumentError;
};

/// Field transformation with a non-invertible kernel.
class SingularTransformError : public Error {
public:
  using Error::Error;
};

} // namespace turbmom
