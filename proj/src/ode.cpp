#include "impulse_geo/ode.hpp"

#include "impulse_geo/errors.hpp"

#include <algorithm>
#include <cmath>

namespace impulse_geo {

namespace {

namespace dp {
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
// difference between the 5th and embedded 4th order weights
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
}  // namespace dp

bool all_finite(const Vector& v) { return v.allFinite(); }

}  // namespace

void StepStats::merge(const StepStats& other) {
  accepted += other.accepted;
  rejected += other.rejected;
  h_min = std::min(h_min, other.h_min);
  h_max = std::max(h_max, other.h_max);
}

void DenseTrajectory::push(double u, Vector y, Vector dy) {
  nodes_.push_back({u, std::move(y), std::move(dy)});
}

std::size_t DenseTrajectory::interval_of(double u) const {
  auto it = std::upper_bound(nodes_.begin(), nodes_.end(), u,
                             [](double value, const Node& n) { return value < n.u; });
  std::size_t idx = it == nodes_.begin() ? 0 : static_cast<std::size_t>(it - nodes_.begin()) - 1;
  return std::min(idx, nodes_.size() - 2);
}

Vector DenseTrajectory::at(double u) const {
  if (nodes_.size() == 1) return nodes_.front().y;
  u = std::clamp(u, u_begin(), u_end());
  const auto i = interval_of(u);
  const Node& a = nodes_[i];
  const Node& b = nodes_[i + 1];
  const double h = b.u - a.u;
  const double t = (u - a.u) / h;
  const double t2 = t * t, t3 = t2 * t;
  const double h00 = 2 * t3 - 3 * t2 + 1;
  const double h10 = t3 - 2 * t2 + t;
  const double h01 = -2 * t3 + 3 * t2;
  const double h11 = t3 - t2;
  return h00 * a.y + h10 * h * a.dy + h01 * b.y + h11 * h * b.dy;
}

Vector DenseTrajectory::derivative_at(double u) const {
  if (nodes_.size() == 1) return nodes_.front().dy;
  u = std::clamp(u, u_begin(), u_end());
  const auto i = interval_of(u);
  const Node& a = nodes_[i];
  const Node& b = nodes_[i + 1];
  const double h = b.u - a.u;
  const double t = (u - a.u) / h;
  const double t2 = t * t;
  const double d00 = (6 * t2 - 6 * t) / h;
  const double d10 = 3 * t2 - 4 * t + 1;
  const double d01 = (-6 * t2 + 6 * t) / h;
  const double d11 = 3 * t2 - 2 * t;
  return d00 * a.y + d10 * a.dy + d01 * b.y + d11 * b.dy;
}

DenseTrajectory integrate_dopri5(const OdeRhs& rhs, double u0, const Vector& y0, double u1,
                                 const StepControl& control, const StepObserver& observer,
                                 StepStats* stats, double h_initial) {
  using namespace dp;
  if (u1 < u0) {
    // s = -u; nodes are stored in increasing u
    const OdeRhs flipped = [&](double s, const Vector& y) -> Vector { return -rhs(-s, y); };
    StepObserver flipped_obs;
    if (observer) flipped_obs = [&](double s, const Vector& y) { return observer(-s, y); };
    DenseTrajectory fwd;
    try {
      fwd = integrate_dopri5(flipped, -u0, y0, -u1, control, flipped_obs, stats, h_initial);
    } catch (const IntegrationFailure& e) {
      throw IntegrationFailure(e.what(), -e.u(), e.state(), e.phase());
    }
    DenseTrajectory out;
    for (auto it = fwd.nodes().rbegin(); it != fwd.nodes().rend(); ++it) out.push(-it->u, it->y, -it->dy);
    return out;
  }
  DenseTrajectory traj;
  StepStats local;

  Vector k1 = rhs(u0, y0);
  traj.push(u0, y0, k1);
  const double span = u1 - u0;
  if (span <= 0.0) {
    if (stats) stats->merge(local);
    return traj;
  }

  double h = h_initial > 0.0 ? h_initial : std::min(control.h_max, 1e-2 * span);
  h = std::min(h, control.h_max);
  double u = u0;
  Vector y = y0;

  const auto fail = [&](const std::string& why) -> IntegrationFailure {
    if (stats) stats->merge(local);
    return IntegrationFailure(why, u, y);
  };

  std::size_t steps = 0;
  while (u < u1) {
    if (++steps > control.max_steps) throw fail("step budget exhausted");
    bool last = false;
    if (u + h >= u1 || u1 - (u + h) < 1e-12 * std::abs(span)) {
      h = u1 - u;
      last = true;
    }
    if (h < control.h_min && !last) throw fail("step size underflow");

    Vector y_new, k7, err;
    bool domain_ok = true;
    try {
      const Vector k2 = rhs(u + c2 * h, y + h * a21 * k1);
      const Vector k3 = rhs(u + c3 * h, y + h * (a31 * k1 + a32 * k2));
      const Vector k4 = rhs(u + c4 * h, y + h * (a41 * k1 + a42 * k2 + a43 * k3));
      const Vector k5 = rhs(u + c5 * h, y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
      const Vector k6 =
          rhs(u + h, y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
      y_new = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
      k7 = rhs(u + h, y_new);
      err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    } catch (const DomainError&) {
      domain_ok = false;
    }

    double err_norm = std::numeric_limits<double>::infinity();
    if (domain_ok && all_finite(y_new) && all_finite(err)) {
      err_norm = 0.0;
      for (Eigen::Index i = 0; i < y.size(); ++i) {
        const double scale =
            control.atol + control.rtol * std::max(std::abs(y[i]), std::abs(y_new[i]));
        err_norm = std::max(err_norm, std::abs(err[i]) / scale);
      }
    }

    if (err_norm <= 1.0) {
      const double u_new = last ? u1 : u + h;
      if (observer) {
        if (auto reason = observer(u_new, y_new)) throw fail(*reason);
      }
      ++local.accepted;
      local.h_min = std::min(local.h_min, h);
      local.h_max = std::max(local.h_max, h);
      u = u_new;
      y = std::move(y_new);
      k1 = std::move(k7);
      traj.push(u, y, k1);
      const double factor =
          err_norm == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err_norm, -0.2), 0.2, 5.0);
      h = std::min(h * factor, control.h_max);
    } else {
      ++local.rejected;
      const double factor =
          std::isfinite(err_norm) ? std::clamp(0.9 * std::pow(err_norm, -0.2), 0.1, 0.5) : 0.25;
      h *= factor;
      if (h < control.h_min) {
        throw fail(domain_ok ? "step size underflow" : "chart escape");
      }
    }
  }

  if (stats) stats->merge(local);
  return traj;
}

}  // namespace impulse_geo
