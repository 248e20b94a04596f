#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace garchtrack {

/// Minimal line-chart writer for MSE-vs-time and MSE-vs-particle-count
/// plots. One polyline per series, linear axes with a handful of ticks.
struct SvgSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

void write_line_chart_svg(std::ostream& os, const std::string& title,
                          const std::string& x_label, const std::string& y_label,
                          std::span<const SvgSeries> series);

}  // namespace garchtrack
