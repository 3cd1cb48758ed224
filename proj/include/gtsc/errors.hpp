#pragma once

#include <stdexcept>
#include <string>

namespace gtsc {

/// Argument outside the mathematical domain of an operation (poles, x <= 0, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A numerical routine did not reach its tolerance. Carries the best estimate.
class AccuracyError : public std::runtime_error {
 public:
  AccuracyError(const std::string& what, double estimate, double error_bound);

  double estimate() const noexcept { return estimate_; }
  double error_bound() const noexcept { return error_bound_; }

 private:
  double estimate_;
  double error_bound_;
};

/// Operation requested for a regime where it is undefined
/// (e.g. the Cramer root of a convolution-equivalent model).
class StateError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Monte Carlo estimation could not produce a result (no ruined paths in budget).
class EstimationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace gtsc
