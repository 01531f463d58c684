#pragma once

#include <stdexcept>
#include <string>

namespace jetflow {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation (e.g. s < 0).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Kernel lacks the smoothness an operation needs.
class RegularityError : public Error {
 public:
  using Error::Error;
};

/// Gram or matching matrix singular or too badly conditioned.
class ConditioningError : public Error {
 public:
  using Error::Error;
};

/// Input violates a structural constraint (incompressibility, shapes, ...).
class ConstraintError : public Error {
 public:
  using Error::Error;
};

/// Implicit solver did not converge.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// Two particles came closer than the collision threshold.
class CollisionError : public Error {
 public:
  using Error::Error;
};

/// Invalid scenario or command-line configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace jetflow
