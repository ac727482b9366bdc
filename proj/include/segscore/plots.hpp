#pragma once

#include "segscore/statistics.hpp"

#include <string>
#include <utility>
#include <vector>

namespace segscore {

struct PlotLabels {
    std::string title;
    std::string x_label;
    std::string y_label;
};

/// Standalone SVG 1.1 bar chart of a histogram. Bar heights scale linearly
/// with the counts. Throws Error("EMPTY_PLOT") when there are no bins.
std::string render_histogram_svg(const Histogram& histogram, const PlotLabels& labels);

/// Standalone SVG 1.1 box plot, one box per named distribution (whiskers at
/// min and max). Throws Error("EMPTY_PLOT") when `series` is empty.
std::string render_boxplot_svg(const std::vector<std::pair<std::string, Distribution>>& series,
                               const PlotLabels& labels);

/// Geometry shared with the tests.
inline constexpr double kPlotWidth = 480.0;
inline constexpr double kPlotHeight = 320.0;
inline constexpr double kPlotLeft = 60.0;
inline constexpr double kPlotRight = 460.0;
inline constexpr double kPlotTop = 40.0;
inline constexpr double kPlotBottom = 280.0;

}  // namespace segscore
