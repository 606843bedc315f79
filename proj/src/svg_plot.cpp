#include "convoysim/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "convoysim/errors.hpp"

namespace convoysim {

namespace {

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#17becf", "#e377c2", "#8c564b",
                          "#bcbd22", "#7f7f7f"};
constexpr int kPaletteSize = 10;

struct Bounds {
  double min_x = std::numeric_limits<double>::infinity();
  double max_x = -std::numeric_limits<double>::infinity();
  double min_y = std::numeric_limits<double>::infinity();
  double max_y = -std::numeric_limits<double>::infinity();

  void grow(const std::vector<XY>& pts) {
    for (const auto& [x, y] : pts) {
      min_x = std::min(min_x, x);
      max_x = std::max(max_x, x);
      min_y = std::min(min_y, y);
      max_y = std::max(max_y, y);
    }
  }
};

double nice_step(double span, int target_ticks) {
  if (!(span > 0)) return 1.0;
  const double raw = span / target_ticks;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (double m : {1.0, 2.0, 5.0, 10.0})
    if (raw <= m * mag) return m * mag;
  return 10.0 * mag;
}

void append_polyline(std::string& svg, const std::vector<XY>& pts,
                     const char* color, double width,
                     const auto& to_px) {
  svg += "  <polyline fill=\"none\" stroke=\"";
  svg += color;
  char buf[64];
  std::snprintf(buf, sizeof buf, "\" stroke-width=\"%.1f\" points=\"", width);
  svg += buf;
  for (const auto& [x, y] : pts) {
    auto [px, py] = to_px(x, y);
    std::snprintf(buf, sizeof buf, "%.2f,%.2f ", px, py);
    svg += buf;
  }
  svg += "\"/>\n";
}

}  // namespace

std::string render_plan_view(const std::vector<XY>& path_points,
                             const std::vector<PlotSeries>& series,
                             const SvgOptions& options) {
  if (path_points.empty()) throw ContractError("plot needs a reference path");

  Bounds b;
  b.grow(path_points);
  for (const PlotSeries& s : series) b.grow(s.points);

  const double pad = 0.05 * std::max(b.max_x - b.min_x, b.max_y - b.min_y) + 0.2;
  b.min_x -= pad;
  b.max_x += pad;
  b.min_y -= pad;
  b.max_y += pad;

  const double margin = 48.0;
  const double plot_w = options.width_px - 2 * margin;
  const double plot_h = options.height_px - 2 * margin;
  // Equal aspect: meters map to the same pixel count on both axes.
  const double scale =
      std::min(plot_w / (b.max_x - b.min_x), plot_h / (b.max_y - b.min_y));
  const double x0 = margin + (plot_w - scale * (b.max_x - b.min_x)) / 2.0;
  const double y0 = margin + (plot_h - scale * (b.max_y - b.min_y)) / 2.0;

  auto to_px = [&](double x, double y) {
    return std::pair<double, double>{
        x0 + (x - b.min_x) * scale,
        options.height_px - (y0 + (y - b.min_y) * scale)};
  };

  char buf[256];
  std::string svg;
  std::snprintf(buf, sizeof buf,
                "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%d\" "
                "height=\"%d\" viewBox=\"0 0 %d %d\">\n",
                options.width_px, options.height_px, options.width_px,
                options.height_px);
  svg += buf;
  svg += "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  std::snprintf(buf, sizeof buf,
                "  <text x=\"%d\" y=\"24\" font-family=\"sans-serif\" "
                "font-size=\"16\" text-anchor=\"middle\">%s</text>\n",
                options.width_px / 2, options.title.c_str());
  svg += buf;

  // Grid and tick labels, meters.
  const double step =
      nice_step(std::max(b.max_x - b.min_x, b.max_y - b.min_y), 8);
  for (double gx = std::ceil(b.min_x / step) * step; gx <= b.max_x; gx += step) {
    auto [px, py_lo] = to_px(gx, b.min_y);
    auto [_, py_hi] = to_px(gx, b.max_y);
    std::snprintf(buf, sizeof buf,
                  "  <line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" "
                  "stroke=\"#e0e0e0\"/>\n",
                  px, py_lo, px, py_hi);
    svg += buf;
    std::snprintf(buf, sizeof buf,
                  "  <text x=\"%.2f\" y=\"%.2f\" font-family=\"sans-serif\" "
                  "font-size=\"11\" text-anchor=\"middle\">%g</text>\n",
                  px, py_lo + 16.0, gx);
    svg += buf;
  }
  for (double gy = std::ceil(b.min_y / step) * step; gy <= b.max_y; gy += step) {
    auto [px_lo, py] = to_px(b.min_x, gy);
    auto [px_hi, _] = to_px(b.max_x, gy);
    std::snprintf(buf, sizeof buf,
                  "  <line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" "
                  "stroke=\"#e0e0e0\"/>\n",
                  px_lo, py, px_hi, py);
    svg += buf;
    std::snprintf(buf, sizeof buf,
                  "  <text x=\"%.2f\" y=\"%.2f\" font-family=\"sans-serif\" "
                  "font-size=\"11\" text-anchor=\"end\">%g</text>\n",
                  px_lo - 6.0, py + 4.0, gy);
    svg += buf;
  }
  std::snprintf(buf, sizeof buf,
                "  <text x=\"%d\" y=\"%d\" font-family=\"sans-serif\" "
                "font-size=\"12\" text-anchor=\"middle\">meters</text>\n",
                options.width_px / 2, options.height_px - 6);
  svg += buf;

  append_polyline(svg, path_points, "#999999", 2.0, to_px);

  for (std::size_t i = 0; i < series.size(); ++i)
    append_polyline(svg, series[i].points, kPalette[i % kPaletteSize], 1.5,
                    to_px);

  // Legend: one entry per unique label, colored by its first series.
  std::vector<std::pair<std::string, const char*>> legend;
  for (std::size_t i = 0; i < series.size(); ++i) {
    bool seen = false;
    for (const auto& [label, color] : legend) seen |= (label == series[i].label);
    if (!seen && !series[i].label.empty())
      legend.emplace_back(series[i].label, kPalette[i % kPaletteSize]);
  }
  double ly = margin + 8.0;
  for (const auto& [label, color] : legend) {
    std::snprintf(buf, sizeof buf,
                  "  <line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" "
                  "stroke=\"%s\" stroke-width=\"3\" class=\"legend\"/>\n",
                  margin + 6.0, ly, margin + 30.0, ly, color);
    svg += buf;
    std::snprintf(buf, sizeof buf,
                  "  <text x=\"%.2f\" y=\"%.2f\" font-family=\"sans-serif\" "
                  "font-size=\"12\" class=\"legend\">%s</text>\n",
                  margin + 36.0, ly + 4.0, label.c_str());
    svg += buf;
    ly += 18.0;
  }

  svg += "</svg>\n";
  return svg;
}

}  // namespace convoysim
