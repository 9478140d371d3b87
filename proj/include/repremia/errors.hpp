#pragma once

#include <stdexcept>
#include <string>

namespace repremia {

/// Argument outside the mathematical domain of an operation (negative loss,
/// probability outside (0,1), inverted layer bounds, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A contract layout or mean constraint that cannot be satisfied. The message
/// names the violated constraint.
class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Zero denominator in a ratio (flat survival segment).
class SingularityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operation not defined for the given family or distortion.
class UnsupportedError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A mean-matching bracket that should exist by construction did not.
class ConstructionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed scenario or CLI configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace repremia
