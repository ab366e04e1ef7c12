#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "ircg/trace.hpp"

namespace ircg {

struct PlotOptions {
  std::string x_column = "t";
  Index t_min = 0;
  Index t_max = std::numeric_limits<Index>::max();
  /// Default: log scale for *_gap columns.
  std::optional<bool> log_y;
  bool log_x = false;
  std::string title;
};

struct PlotOutput {
  std::string svg_path;
  std::vector<std::string> sidecar_paths;
};

/// One series per (trace, column). Writes a standalone SVG at out_path and a
/// two-column sidecar "<out_path stem>.<k>.dat" per series; points dropped from
/// a log axis are listed as comments in the sidecar. InsufficientData when no
/// series has a point left after filtering.
PlotOutput emit_plot(const std::vector<RunTrace>& traces, const std::vector<std::string>& columns,
                     const std::string& out_path, const PlotOptions& opts = {});

}  // namespace ircg
