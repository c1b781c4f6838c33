#pragma once

#include <stdexcept>
#include <string>

namespace singflow {

// Invalid inputs / violated preconditions. The CLI maps these to exit code 2.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Numerical failures at runtime (unbracketed roots, unstable extractions, ...).
// The CLI maps these to exit code 3.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A quantity was requested at (or too close to) a pole; `location` is the
// offending coordinate (radius, angle, ...).
class PoleError : public NumericalError {
 public:
  PoleError(const std::string& what, double where)
      : NumericalError(what), location(where) {}
  double location;
};

// Grid or step budget too coarse for the requested range.
class ResolutionError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

// The matching condition has no root on the requested branch.
class BranchInfeasibleError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

// Phase extraction failed its radius-independence check.
class StabilityError : public NumericalError {
 public:
  StabilityError(const std::string& what, double drift)
      : NumericalError(what), drift(drift) {}
  double drift;
};

// Evaluation requested outside an approximation's validity region; carries the
// violated indicator value.
class ValidityError : public NumericalError {
 public:
  ValidityError(const std::string& what, double indicator)
      : NumericalError(what), indicator(indicator) {}
  double indicator;
};

// No phase reproduces the requested observable.
class ObservableInfeasibleError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace singflow
