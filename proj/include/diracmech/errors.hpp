#pragma once

#include <stdexcept>
#include <string>

namespace diracmech {

// Dimension or finiteness violation in a space/point/covector argument.
class ContractViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A gradient evaluation produced a non-finite value; carries the coordinate.
class GradientError : public std::runtime_error {
 public:
  GradientError(const std::string& msg, int coordinate)
      : std::runtime_error(msg), coordinate_(coordinate) {}
  int coordinate() const { return coordinate_; }

 private:
  int coordinate_;
};

class SingularJacobianError : public std::runtime_error {
 public:
  SingularJacobianError(const std::string& msg, double rcond)
      : std::runtime_error(msg), rcond_(rcond) {}
  double rcond() const { return rcond_; }

 private:
  double rcond_;
};

class NoConvergenceError : public std::runtime_error {
 public:
  NoConvergenceError(const std::string& msg, double last_residual, int iterations)
      : std::runtime_error(msg), last_residual_(last_residual), iterations_(iterations) {}
  double last_residual() const { return last_residual_; }
  int iterations() const { return iterations_; }

 private:
  double last_residual_;
  int iterations_;
};

// Requested configuration sits on (or too close to) a non-free group orbit.
class InvalidChartError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace diracmech
