#pragma once

#include <string>
#include <vector>

#include "ircg/trace.hpp"

namespace ircg {

struct CompareRow {
  std::string instance;
  std::string solver;
  Index iterations = 0;
  /// min over rows of g_x - g_opt; NaN when the trace has no g_opt.
  double best_inner_gap = kMissing;
  /// f_x at the row attaining best_inner_gap (or the last row without g_opt).
  double outer_at_best = kMissing;
  double wall_time_s = 0;
  std::string error;
};

/// One row per trace, grouped by instance then solver.
std::vector<CompareRow> compare(const std::vector<RunTrace>& traces);
std::string format_compare_text(const std::vector<CompareRow>& rows);
std::string format_compare_csv(const std::vector<CompareRow>& rows);

}  // namespace ircg
