#pragma once

#include <span>
#include <string>
#include <vector>

#include "convoysim/errors.hpp"

namespace convoysim {

struct PathSample {
  double x_m = 0.0;
  double y_m = 0.0;
  double heading_rad = 0.0;   // tangent direction
  double s_m = 0.0;           // cumulative arc length
  double curvature_1pm = 0.0; // signed, positive = turning left
};

struct PathQuery {
  double x_m = 0.0;
  double y_m = 0.0;
  double s_m = 0.0;
  double cross_track_m = 0.0;  // signed, positive when left of the path
  double tangent_heading_rad = 0.0;
  double curvature_1pm = 0.0;
};

/// Discretized reference track with arc-length parameterization. Immutable
/// after construction; queries are pure.
class Path {
 public:
  Path(std::vector<PathSample> samples, bool closed, double total_length_m);

  const std::vector<PathSample>& samples() const { return samples_; }
  bool closed() const { return closed_; }
  double total_length_m() const { return total_length_; }

  /// Closest point on the polyline (with segment interpolation). Ties are
  /// broken toward the smallest s.
  PathQuery nearest(double x_m, double y_m) const;

  /// Forward arc distance from s_from to s_to (wraps on closed paths).
  double forward_distance(double s_from, double s_to) const;

  /// Interpolated sample at arc length s (wrapped on closed paths,
  /// clamped on open ones).
  PathSample at_s(double s_m) const;

  std::string to_csv() const;  // "s,x,y,heading" rows

 private:
  std::vector<PathSample> samples_;
  bool closed_;
  double total_length_;
};

/// Stadium track: two straights of (length - width) joined by semicircles of
/// radius width/2, centered on the origin, traversed counterclockwise from
/// the start of the lower straight. Throws GeometryError unless
/// length > width > 0.
Path oval_path(double length_m = 8.0, double width_m = 4.0,
               double spacing_m = 0.02);

/// Open straight segment, mostly for tests.
Path line_path(double x0, double y0, double x1, double y1, double spacing_m);

/// Two-speed lap profile keyed on cumulative distance traveled (not wrapped
/// arc position): 1 m/s before the half-lap point, 2 m/s from it onward.
double speed_profile(double cumulative_m, const Path& path);

/// Root-mean-square of a non-empty list of finite values.
double rmse(std::span<const double> values);

}  // namespace convoysim
