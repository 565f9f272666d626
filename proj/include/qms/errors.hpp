#pragma once

#include <stdexcept>
#include <string>

namespace qms {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Block shapes or algebra references do not line up.
class StructuralError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Bratteli data violates unitality or shape constraints.
class DiagramError : public Error {
 public:
  using Error::Error;
};

/// Configured dimension or depth cap exceeded.
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// Numerical breakdown (singular Gram matrix, non-finite values).
class NumericError : public Error {
 public:
  using Error::Error;
};

/// Schema violation in a JSON descriptor or experiment config.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace qms
