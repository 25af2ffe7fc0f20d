#pragma once

#include <stdexcept>
#include <string>

namespace gatebound {

/// Base of every error raised by the library. The CLI maps ValidationError
/// to exit code 2 and every other subclass to exit code 3.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Bad input: malformed configuration, precondition violated by the caller.
class ValidationError : public Error {
public:
  using Error::Error;
};

class CutoffInsufficientError : public Error {
public:
  using Error::Error;
};

class DimensionError : public ValidationError {
public:
  using ValidationError::ValidationError;
};

class IndexError : public ValidationError {
public:
  using ValidationError::ValidationError;
};

class UncertaintyViolationError : public ValidationError {
public:
  using ValidationError::ValidationError;
};

/// A numerical method did not reach the requested tolerance.
class IntegrationFailure : public Error {
public:
  using Error::Error;
};

/// Two independent numerical routes disagree beyond their stated tolerance.
class NumericalInconsistencyError : public Error {
public:
  using Error::Error;
};

class SymmetryViolationError : public Error {
public:
  using Error::Error;
};

class SamplingError : public Error {
public:
  using Error::Error;
};

class DegenerateConfigurationError : public Error {
public:
  using Error::Error;
};

} // namespace gatebound
