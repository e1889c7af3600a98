#pragma once

#include "impulse_geo/types.hpp"

#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace impulse_geo {

using OdeRhs = std::function<Vector(double u, const Vector& y)>;

// Called on every accepted step. A returned string aborts the integration
// with that reason; the previously accepted state is reported as the last
// valid one.
using StepObserver = std::function<std::optional<std::string>(double u, const Vector& y)>;

struct StepControl {
  double rtol = 1e-10;
  double atol = 1e-10;
  double h_max = std::numeric_limits<double>::infinity();
  double h_min = 1e-14;
  std::size_t max_steps = 10'000'000;
};

struct StepStats {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  double h_min = std::numeric_limits<double>::infinity();
  double h_max = 0.0;

  void merge(const StepStats& other);
};

// Piecewise cubic Hermite interpolant through the accepted steps.
class DenseTrajectory {
 public:
  struct Node {
    double u;
    Vector y;
    Vector dy;
  };

  DenseTrajectory() = default;

  bool empty() const { return nodes_.empty(); }
  double u_begin() const { return nodes_.front().u; }
  double u_end() const { return nodes_.back().u; }
  const std::vector<Node>& nodes() const { return nodes_; }
  const Node& front() const { return nodes_.front(); }
  const Node& back() const { return nodes_.back(); }

  void push(double u, Vector y, Vector dy);

  // u is clamped to [u_begin, u_end].
  Vector at(double u) const;
  Vector derivative_at(double u) const;

 private:
  std::size_t interval_of(double u) const;

  std::vector<Node> nodes_;
};

// Dormand-Prince 5(4) with max-norm mixed error control. The trajectory
// ends exactly at u1. Throws IntegrationFailure on step underflow, a
// rejected observer check, or when every retry of a step lands outside
// the right-hand side's domain (DomainError from rhs).
DenseTrajectory integrate_dopri5(const OdeRhs& rhs, double u0, const Vector& y0, double u1,
                                 const StepControl& control, const StepObserver& observer = {},
                                 StepStats* stats = nullptr, double h_initial = 0.0);

}  // namespace impulse_geo
