#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace impulse_geo {

// Point outside a chart domain, or a ball that does not fit in it.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Bad user input: config, names, preconditions.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Numerical failure that is not a precondition violation.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An ODE integration stopped early. Carries the last accepted state.
class IntegrationFailure : public NumericalError {
 public:
  IntegrationFailure(const std::string& what, double u, Eigen::VectorXd state,
                     std::string phase = {})
      : NumericalError(what), u_(u), state_(std::move(state)), phase_(std::move(phase)) {}

  double u() const { return u_; }
  const Eigen::VectorXd& state() const { return state_; }
  const std::string& phase() const { return phase_; }

 private:
  double u_;
  Eigen::VectorXd state_;
  std::string phase_;
};

// Picard iterate left the box I1 x I2 of its certificate.
class CertificateViolation : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace impulse_geo
