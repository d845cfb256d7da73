#pragma once

#include <filesystem>
#include <string>

#include "holobeam/harness.hpp"

namespace holobeam {

enum class PlotMetric { error_rate, mean_rate };

struct PlotOptions {
  PlotMetric metric = PlotMetric::error_rate;
  bool log_y = false;
  std::string title;
  int width = 720;
  int height = 480;
};

/// Line chart of a results table: one polyline per (policy, power, distance)
/// series over n, with 95% CI whiskers. Output is deterministic.
std::string render_svg(const ExperimentResult& result, const PlotOptions& options);

/// Reads a results CSV and writes the SVG. Throws Error(parse_error) for a
/// malformed CSV.
void emit_svg(const std::filesystem::path& csv_path, const std::filesystem::path& svg_path,
              const PlotOptions& options);

}  // namespace holobeam
