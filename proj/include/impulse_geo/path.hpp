#pragma once

#include "impulse_geo/ode.hpp"
#include "impulse_geo/types.hpp"

#include <string_view>
#include <utility>
#include <vector>

namespace impulse_geo {

// Position in the three-phase pasted trajectory.
enum class Phase { before_strip, strip, after_strip };

std::string_view phase_name(Phase p);

struct GeodesicState {
  double u = 0.0;
  ChartPoint x;
  Vector xdot;
  double v = 0.0;
  double vdot = 0.0;

  // ODE layout: [x, xdot, v, vdot]
  Vector pack() const;
  static GeodesicState unpack(double u, const Vector& y);
};

struct PathDiagnostics {
  double initial_energy = 0.0;
  double max_energy_drift = 0.0;
  StepStats steps;
};

// Contiguous dense-output segments over increasing u.
class GeodesicPath {
 public:
  struct Segment {
    Phase phase;
    DenseTrajectory trajectory;
  };

  GeodesicPath() = default;
  GeodesicPath(int dim, double eps) : dim_(dim), eps_(eps) {}

  int dim() const { return dim_; }
  double eps() const { return eps_; }
  std::pair<double, double> phase_marks() const { return {-eps_, eps_}; }

  // Segments must abut the previous one; empty trajectories are skipped.
  void add_segment(Phase phase, DenseTrajectory traj);

  const std::vector<Segment>& segments() const { return segments_; }
  bool empty() const { return segments_.empty(); }
  double u_begin() const { return segments_.front().trajectory.u_begin(); }
  double u_end() const { return segments_.back().trajectory.u_end(); }

  // Clamped to [u_begin, u_end]. At a segment boundary the earlier segment wins.
  GeodesicState state_at(double u) const;
  Phase phase_at(double u) const;

  const PathDiagnostics& diagnostics() const { return diagnostics_; }
  PathDiagnostics& diagnostics() { return diagnostics_; }

 private:
  const Segment& segment_at(double u) const;

  int dim_ = 0;
  double eps_ = 0.0;
  std::vector<Segment> segments_;
  PathDiagnostics diagnostics_;
};

}  // namespace impulse_geo
