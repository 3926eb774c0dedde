#pragma once

#include <stdexcept>
#include <string>

namespace phasebound {

/// Input violates a documented precondition (bad phase, k > m, malformed prior).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A computation could not produce a finite, trustworthy number.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DegeneratePosterior : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// An information integral (posterior or prior) diverges.
class NonIntegrable : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Ridge regularisation moved a quadratic form by more than the allowed amount.
class IllConditioned : public NumericalError {
 public:
  IllConditioned(const std::string& what, double plain, double ridged)
      : NumericalError(what), plain_value(plain), ridged_value(ridged) {}
  double plain_value;
  double ridged_value;
};

class NotPositiveDefinite : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// A bound chain that must hold was violated beyond its slack.
class HierarchyViolation : public std::runtime_error {
 public:
  HierarchyViolation(const std::string& what, std::string upper, std::string lower)
      : std::runtime_error(what), upper_name(std::move(upper)), lower_name(std::move(lower)) {}
  std::string upper_name;
  std::string lower_name;
};

}  // namespace phasebound
