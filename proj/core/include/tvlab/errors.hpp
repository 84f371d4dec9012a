#pragma once

#include <stdexcept>
#include <string>

namespace tvlab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A field contained NaN/Inf, or two fields live on different grids.
class FieldError : public Error {
 public:
  using Error::Error;
};

/// A caller supplied an argument outside an operation's domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Raised by the time stepper when a step cannot be completed.
class StepFailure : public Error {
 public:
  using Error::Error;
};

/// Malformed or inconsistent configuration input.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace tvlab
