#pragma once

#include <string>
#include <utility>
#include <vector>

namespace convoysim {

using XY = std::pair<double, double>;

struct PlotSeries {
  std::string label;
  std::vector<XY> points;
};

struct SvgOptions {
  int width_px = 860;
  int height_px = 560;
  std::string title = "Plan view";
};

/// Self-contained plan-view SVG: the reference path in gray, one polyline
/// per series with distinct stroke colors, a legend with one entry per
/// unique series label, and equal-aspect axes in meters.
std::string render_plan_view(const std::vector<XY>& path_points,
                             const std::vector<PlotSeries>& series,
                             const SvgOptions& options = {});

}  // namespace convoysim
