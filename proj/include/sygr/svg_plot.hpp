#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sygr/kde.hpp"

namespace sygr {

// A KDE curve, or a vertical marker at `point_mass` when the ensemble was
// degenerate.
struct PlotSeries {
  std::string label;
  std::vector<KdePoint> curve;
  std::optional<double> point_mass;
};

// Static SVG line chart, x axis 0-100%. Output is a pure function of the
// input (no timestamps, fixed number formatting).
std::string render_kde_svg(std::span<const PlotSeries> series, const std::string& title = "");

}  // namespace sygr
