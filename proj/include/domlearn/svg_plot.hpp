#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "domlearn/csv.hpp"
#include "domlearn/experiment.hpp"

namespace domlearn {
namespace detail {

inline std::string format_tick(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

}  // namespace detail

/// Renders the learning curve as a self-contained SVG: one polyline per
/// classifier (class="series"), x = training objects per class, y = mean
/// e_S. Higher curves are better.
inline void emit_plot(const LearningCurve& curve, const std::string& path) {
  if (curve.classifier_ids.empty() || curve.sizes.empty()) {
    throw std::invalid_argument("emit_plot: empty learning curve");
  }
  const double width = 820.0, height = 540.0;
  const double left = 80.0, right = width - 240.0, top = 40.0, bottom = height - 70.0;

  double x_min = static_cast<double>(curve.sizes.front());
  double x_max = static_cast<double>(curve.sizes.back());
  if (x_max <= x_min) x_max = x_min + 1.0;
  double y_min = std::numeric_limits<double>::infinity();
  double y_max = -std::numeric_limits<double>::infinity();
  for (const auto& cell : curve.cells) {
    if (std::isfinite(cell.mean)) {
      y_min = std::min(y_min, cell.mean);
      y_max = std::max(y_max, cell.mean);
    }
  }
  if (!std::isfinite(y_min)) {
    y_min = -1.0;
    y_max = 1.0;
  }
  if (y_max - y_min < 1e-12) {
    y_min -= 1.0;
    y_max += 1.0;
  }
  const double y_pad = 0.05 * (y_max - y_min);
  y_min -= y_pad;
  y_max += y_pad;

  auto sx = [&](double v) { return left + (v - x_min) / (x_max - x_min) * (right - left); };
  auto sy = [&](double v) { return bottom - (v - y_min) / (y_max - y_min) * (bottom - top); };

  static const char* palette[] = {"#1b6ca8", "#d1495b", "#66a182", "#edae49", "#6f4a8e",
                                  "#2e2e38", "#8c5e58", "#00798c"};

  std::ofstream out(path);
  if (!out) throw std::runtime_error("emit_plot: cannot open " + path + " for writing");
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
  out << "  <rect width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";

  // Axes.
  out << "  <line x1=\"" << left << "\" y1=\"" << bottom << "\" x2=\"" << right << "\" y2=\""
      << bottom << "\" stroke=\"black\"/>\n";
  out << "  <line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << bottom
      << "\" stroke=\"black\"/>\n";
  for (int s : curve.sizes) {
    const double x = sx(static_cast<double>(s));
    out << "  <line x1=\"" << x << "\" y1=\"" << bottom << "\" x2=\"" << x << "\" y2=\""
        << bottom + 5 << "\" stroke=\"black\"/>\n";
    out << "  <text x=\"" << x << "\" y=\"" << bottom + 20
        << "\" font-size=\"12\" text-anchor=\"middle\">" << s << "</text>\n";
  }
  const int y_ticks = 6;
  for (int t = 0; t <= y_ticks; ++t) {
    const double v = y_min + (y_max - y_min) * t / y_ticks;
    const double y = sy(v);
    out << "  <line x1=\"" << left - 5 << "\" y1=\"" << y << "\" x2=\"" << left << "\" y2=\"" << y
        << "\" stroke=\"black\"/>\n";
    out << "  <line x1=\"" << left << "\" y1=\"" << y << "\" x2=\"" << right << "\" y2=\"" << y
        << "\" stroke=\"#dddddd\"/>\n";
    out << "  <text x=\"" << left - 9 << "\" y=\"" << y + 4
        << "\" font-size=\"12\" text-anchor=\"end\">" << detail::format_tick(v) << "</text>\n";
  }

  // Series.
  for (std::size_t ci = 0; ci < curve.classifier_ids.size(); ++ci) {
    const char* color = palette[ci % (sizeof(palette) / sizeof(palette[0]))];
    std::string points;
    for (std::size_t si = 0; si < curve.sizes.size(); ++si) {
      const CurveCell& cell = curve.cell(ci, si);
      if (!std::isfinite(cell.mean)) continue;
      points += detail::format_tick(sx(static_cast<double>(cell.train_size)));
      points += ",";
      points += detail::format_tick(sy(cell.mean));
      points += " ";
    }
    out << "  <polyline class=\"series\" fill=\"none\" stroke=\"" << color
        << "\" stroke-width=\"2\" points=\"" << points << "\"/>\n";
    // Legend entry.
    const double ly = top + 18.0 * static_cast<double>(ci);
    out << "  <line x1=\"" << right + 14 << "\" y1=\"" << ly << "\" x2=\"" << right + 44
        << "\" y2=\"" << ly << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    out << "  <text x=\"" << right + 50 << "\" y=\"" << ly + 4 << "\" font-size=\"12\">"
        << curve.display_names[ci] << "</text>\n";
  }

  out << "  <text x=\"" << (left + right) / 2 << "\" y=\"" << bottom + 42
      << "\" font-size=\"13\" text-anchor=\"middle\">training objects per class</text>\n";
  out << "  <text x=\"20\" y=\"" << (top + bottom) / 2
      << "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 20 "
      << (top + bottom) / 2 << ")\">mean e_S</text>\n";
  out << "  <text x=\"" << (left + right) / 2 << "\" y=\"" << bottom + 60
      << "\" font-size=\"12\" text-anchor=\"middle\" fill=\"#444444\">worst-case signed distance "
         "to the decision boundary, averaged over repetitions; higher is better</text>\n";
  out << "</svg>\n";
  if (!out) throw std::runtime_error("emit_plot: write failed for " + path);
}

}  // namespace domlearn
