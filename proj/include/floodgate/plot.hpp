#pragma once

#include "floodgate/detector.hpp"
#include "floodgate/metrics.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace floodgate {

struct Series
{
  std::vector<double> x;
  std::vector<double> y;
};

enum class ChartStyle { Line, Step, Scatter };

/// Minimal static SVG chart with axes and min/max tick labels.
std::string render_svg_chart(const Series& data,
                             const std::string& title,
                             const std::string& x_label,
                             const std::string& y_label,
                             ChartStyle style);

/// Writes drops, utilization, arrivals-vs-utilization, drops-vs-utilization
/// and alarm-signal charts into `dir`. Returns the files written.
std::vector<std::filesystem::path> write_plots(const std::filesystem::path& dir,
                                               const std::vector<MetricsWindow>& windows,
                                               const std::vector<AlarmSignal>& signals);

} // namespace floodgate
