#include "convoysim/track.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

#include "convoysim/dynamics.hpp"

namespace convoysim {

namespace {

struct StadiumPoint {
  double x, y, heading, curvature;
};

// Analytic stadium evaluated at arc length s, counterclockwise.
StadiumPoint stadium_at(double s, double straight, double radius) {
  const double pi = std::numbers::pi;
  const double arc = pi * radius;
  if (s < straight) {  // lower straight, heading +x
    return {-straight / 2.0 + s, -radius, 0.0, 0.0};
  }
  s -= straight;
  if (s < arc) {  // right semicircle
    double phi = -pi / 2.0 + s / radius;
    return {straight / 2.0 + radius * std::cos(phi), radius * std::sin(phi),
            normalize_angle(phi + pi / 2.0), 1.0 / radius};
  }
  s -= arc;
  if (s < straight) {  // upper straight, heading -x
    return {straight / 2.0 - s, radius, pi, 0.0};
  }
  s -= straight;
  {  // left semicircle
    double phi = pi / 2.0 + s / radius;
    return {-straight / 2.0 + radius * std::cos(phi), radius * std::sin(phi),
            normalize_angle(phi + pi / 2.0), 1.0 / radius};
  }
}

double angle_lerp(double a, double b, double t) {
  return normalize_angle(a + t * normalize_angle(b - a));
}

}  // namespace

Path::Path(std::vector<PathSample> samples, bool closed, double total_length_m)
    : samples_(std::move(samples)), closed_(closed),
      total_length_(total_length_m) {
  if (samples_.size() < 2) throw GeometryError("path needs at least 2 samples");
  for (std::size_t i = 1; i < samples_.size(); ++i)
    if (!(samples_[i].s_m > samples_[i - 1].s_m))
      throw GeometryError("path arc length must increase strictly");
  if (samples_.front().s_m != 0.0)
    throw GeometryError("path must start at s = 0");
}

PathQuery Path::nearest(double x, double y) const {
  const std::size_t n = samples_.size();
  const std::size_t seg_count = closed_ ? n : n - 1;

  double best_d2 = std::numeric_limits<double>::infinity();
  PathQuery best;

  for (std::size_t i = 0; i < seg_count; ++i) {
    const PathSample& a = samples_[i];
    const PathSample& b = samples_[(i + 1) % n];
    const double s_b = (i + 1 == n) ? total_length_ : b.s_m;

    const double ex = b.x_m - a.x_m;
    const double ey = b.y_m - a.y_m;
    const double len2 = ex * ex + ey * ey;
    double t = len2 > 0 ? ((x - a.x_m) * ex + (y - a.y_m) * ey) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);

    const double fx = a.x_m + t * ex;
    const double fy = a.y_m + t * ey;
    const double dx = x - fx;
    const double dy = y - fy;
    const double d2 = dx * dx + dy * dy;

    if (d2 < best_d2) {
      best_d2 = d2;
      const double heading = angle_lerp(a.heading_rad, b.heading_rad, t);
      best.x_m = fx;
      best.y_m = fy;
      best.s_m = a.s_m + t * (s_b - a.s_m);
      best.tangent_heading_rad = heading;
      best.curvature_1pm = (t < 0.5) ? a.curvature_1pm : b.curvature_1pm;
      // Signed distance onto the left normal of the tangent.
      best.cross_track_m = -std::sin(heading) * dx + std::cos(heading) * dy;
    }
  }
  if (closed_ && best.s_m >= total_length_) best.s_m -= total_length_;
  return best;
}

double Path::forward_distance(double s_from, double s_to) const {
  if (!closed_) return s_to - s_from;
  double d = std::fmod(s_to - s_from, total_length_);
  if (d < 0) d += total_length_;
  return d;
}

PathSample Path::at_s(double s) const {
  if (closed_) {
    s = std::fmod(s, total_length_);
    if (s < 0) s += total_length_;
  } else {
    s = std::clamp(s, 0.0, total_length_);
  }

  auto it = std::upper_bound(
      samples_.begin(), samples_.end(), s,
      [](double value, const PathSample& p) { return value < p.s_m; });
  const std::size_t i = (it == samples_.begin())
                            ? 0
                            : static_cast<std::size_t>(it - samples_.begin()) - 1;
  const PathSample& a = samples_[i];
  const bool wrap = (i + 1 == samples_.size());
  if (wrap && !closed_) return a;
  const PathSample& b = samples_[wrap ? 0 : i + 1];
  const double s_b = wrap ? total_length_ : b.s_m;
  const double span = s_b - a.s_m;
  const double t = span > 0 ? (s - a.s_m) / span : 0.0;

  PathSample out;
  out.x_m = a.x_m + t * (b.x_m - a.x_m);
  out.y_m = a.y_m + t * (b.y_m - a.y_m);
  out.heading_rad = angle_lerp(a.heading_rad, b.heading_rad, t);
  out.s_m = s;
  out.curvature_1pm = (t < 0.5) ? a.curvature_1pm : b.curvature_1pm;
  return out;
}

std::string Path::to_csv() const {
  std::string out = "s,x,y,heading\n";
  char buf[128];
  for (const PathSample& p : samples_) {
    std::snprintf(buf, sizeof buf, "%.6f,%.6f,%.6f,%.6f\n", p.s_m, p.x_m,
                  p.y_m, p.heading_rad);
    out += buf;
  }
  return out;
}

Path oval_path(double length_m, double width_m, double spacing_m) {
  if (!(width_m > 0) || !(length_m > width_m))
    throw GeometryError("stadium needs length > width > 0");
  if (!(spacing_m > 0)) throw GeometryError("sample spacing must be positive");

  const double straight = length_m - width_m;
  const double radius = width_m / 2.0;
  const double total = 2.0 * straight + std::numbers::pi * width_m;

  const std::size_t n =
      static_cast<std::size_t>(std::ceil(total / spacing_m));
  const double ds = total / static_cast<double>(n);

  std::vector<PathSample> samples;
  samples.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double s = ds * static_cast<double>(k);
    const StadiumPoint p = stadium_at(s, straight, radius);
    samples.push_back({p.x, p.y, p.heading, s, p.curvature});
  }
  return Path(std::move(samples), /*closed=*/true, total);
}

Path line_path(double x0, double y0, double x1, double y1, double spacing_m) {
  if (!(spacing_m > 0)) throw GeometryError("sample spacing must be positive");
  const double len = std::hypot(x1 - x0, y1 - y0);
  if (!(len > 0)) throw GeometryError("line path needs distinct endpoints");
  const double heading = std::atan2(y1 - y0, x1 - x0);
  const std::size_t n = static_cast<std::size_t>(std::ceil(len / spacing_m));
  const double ds = len / static_cast<double>(n);

  std::vector<PathSample> samples;
  samples.reserve(n + 1);
  for (std::size_t k = 0; k <= n; ++k) {
    const double s = std::min(ds * static_cast<double>(k), len);
    samples.push_back({x0 + s / len * (x1 - x0), y0 + s / len * (y1 - y0),
                       heading, s, 0.0});
  }
  return Path(std::move(samples), /*closed=*/false, len);
}

double speed_profile(double cumulative_m, const Path& path) {
  return cumulative_m < path.total_length_m() / 2.0 ? 1.0 : 2.0;
}

double rmse(std::span<const double> values) {
  if (values.empty()) throw ContractError("rmse of an empty list");
  double sum_sq = 0.0;
  for (double v : values) {
    if (!std::isfinite(v)) throw ContractError("rmse of a non-finite value");
    sum_sq += v * v;
  }
  return std::sqrt(sum_sq / static_cast<double>(values.size()));
}

}  // namespace convoysim
