#pragma once

#include <string>
#include <vector>

namespace regimecast {

struct PlotSeries {
    std::string label;
    std::vector<double> values;
};

/// Deterministic SVG line plot: the same input always yields byte-identical
/// output. Series are overlaid with a shared y-scale and a legend.
void emit_plot(const std::vector<PlotSeries>& series, const std::string& path,
               const std::string& title = "");

/// Deterministic SVG bar chart (one bar per labeled value).
void emit_bars(const std::vector<std::pair<std::string, double>>& bars, const std::string& path,
               const std::string& title = "");

}  // namespace regimecast
