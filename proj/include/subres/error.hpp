#pragma once

#include <stdexcept>
#include <string>

namespace subres {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An input lies outside the mathematical domain of an operation
/// (invalid exponents, α outside (0,1), κ = 0 where λ is required, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A numerical procedure could not deliver its contract: quadrature did not
/// converge, no root bracket, WKB used inside the turning region.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// The requested horizon is not supported by the coefficient truncation,
/// or the truncation policy itself cannot be met.
class HorizonError : public NumericError {
 public:
  using NumericError::NumericError;
};

/// Malformed or contradictory user configuration.
class UsageError : public Error {
 public:
  using Error::Error;
};

}  // namespace subres
