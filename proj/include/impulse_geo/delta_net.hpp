#pragma once

#include <functional>
#include <string>
#include <vector>

namespace impulse_geo {

// A family delta_eps of smooth regularizations of the Dirac delta, normalized
// so that supp(delta_eps) lies in (-support_radius(eps), support_radius(eps)).
class DeltaNet {
 public:
  using Fn = std::function<double(double eps, double u)>;

  struct Definition {
    std::string name;
    Fn eval;
    Fn deriv;  // optional; central differences otherwise
    std::function<double(double eps)> support_radius;
    double l1_bound = 1.0;  // K
  };

  explicit DeltaNet(Definition def);

  const std::string& name() const { return def_.name; }
  double l1_bound() const { return def_.l1_bound; }
  bool analytic_derivative() const { return static_cast<bool>(def_.deriv); }

  double support_radius(double eps) const { return def_.support_radius(eps); }

  // Zero whenever |u| >= support_radius(eps).
  double eval(double eps, double u) const;
  double deriv(double eps, double u) const;
  // The underlying callback without the support mask.
  double raw_eval(double eps, double u) const { return def_.eval(eps, u); }

 private:
  Definition def_;
};

// rho(s) = C exp(-1/(1-s^2)) on (-1, 1), C normalizing the integral to 1.
double mollifier_bump(double s);
double mollifier_bump_derivative(double s);
double mollifier_normalization();

// rho(u/eps)/eps, K = 1
DeltaNet mollifier_net();
// rescaled bump supported in (-eps, eps/2), K = 1
DeltaNet asymmetric_net();
// (1.25 rho - 0.25 rho_narrow)(u/eps)/eps, sign-changing, K = 1.5
DeltaNet signed_net();

// Forced-failure families for the verification gate.
DeltaNet scaled_net(const DeltaNet& base, double factor);  // integral -> factor
DeltaNet fixed_support_net();                               // rho(u), ignores eps

std::vector<std::string> builtin_net_names();
DeltaNet net_by_name(const std::string& name);

struct NetSample {
  double eps = 0.0;
  double support_radius = 0.0;
  double integral = 0.0;
  double l1_norm = 0.0;
  double quadrature_error = 0.0;
  bool support_ok = false;     // declared radius <= eps and no mass found outside it
  bool indeterminate = false;  // quadrature did not reach its tolerance
};

struct NetVerification {
  std::vector<NetSample> samples;
  bool support_shrinks = false;     // (i)
  bool integral_converges = false;  // (ii)
  bool l1_bounded = false;          // (iii)
  bool indeterminate = false;
  double measured_l1_max = 0.0;
  double declared_l1_bound = 0.0;

  bool passed() const {
    return support_shrinks && integral_converges && l1_bounded && !indeterminate;
  }
};

// Checks the three strict-delta-net properties over a strictly decreasing
// schedule. (ii) passes when |int - 1| never grows by more than tol from one
// eps to the next and ends below tol.
NetVerification verify_strict_delta_net(const DeltaNet& net, const std::vector<double>& eps_schedule,
                                        double tol);

}  // namespace impulse_geo
