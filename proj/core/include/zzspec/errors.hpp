#pragma once

#include <stdexcept>
#include <string>

namespace zzspec {

// Base of every error raised by the library. The front end maps the subclasses
// onto exit codes: ConfigError -> 2, NumericalError -> 3.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class GeometryError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

// Geometry kinds the library knows about but deliberately does not model.
class OutOfScopeError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class NumericalError : public Error {
 public:
  using Error::Error;
};

// Thrown when A - tau*B has a (numerically) zero pivot; callers nudge tau.
class SingularShiftError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace zzspec
