#include "impulse_geo/path.hpp"

#include "impulse_geo/errors.hpp"

#include <algorithm>
#include <cmath>

namespace impulse_geo {

std::string_view phase_name(Phase p) {
  switch (p) {
    case Phase::before_strip: return "before_strip";
    case Phase::strip: return "strip";
    case Phase::after_strip: return "after_strip";
  }
  return "unknown";
}

Vector GeodesicState::pack() const {
  const auto n = x.size();
  Vector y(2 * n + 2);
  y.head(n) = x;
  y.segment(n, n) = xdot;
  y[2 * n] = v;
  y[2 * n + 1] = vdot;
  return y;
}

GeodesicState GeodesicState::unpack(double u, const Vector& y) {
  const auto n = (y.size() - 2) / 2;
  return {u, y.head(n), y.segment(n, n), y[2 * n], y[2 * n + 1]};
}

void GeodesicPath::add_segment(Phase phase, DenseTrajectory traj) {
  if (traj.empty()) return;
  if (!segments_.empty()) {
    const double prev_end = segments_.back().trajectory.u_end();
    if (std::abs(traj.u_begin() - prev_end) > 1e-14 * (1.0 + std::abs(prev_end))) {
      throw NumericalError("path segments are not contiguous");
    }
  }
  segments_.push_back({phase, std::move(traj)});
}

const GeodesicPath::Segment& GeodesicPath::segment_at(double u) const {
  if (segments_.empty()) throw NumericalError("empty geodesic path");
  for (const auto& s : segments_) {
    if (u <= s.trajectory.u_end()) return s;
  }
  return segments_.back();
}

GeodesicState GeodesicPath::state_at(double u) const {
  const auto& seg = segment_at(u);
  const double uc = std::clamp(u, u_begin(), u_end());
  return GeodesicState::unpack(uc, seg.trajectory.at(uc));
}

Phase GeodesicPath::phase_at(double u) const { return segment_at(u).phase; }

}  // namespace impulse_geo
