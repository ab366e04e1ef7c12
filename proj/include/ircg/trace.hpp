#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ircg/types.hpp"

namespace ircg {

inline constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();

/// One recorded iterate. z columns and alpha are NaN where undefined
/// (baselines, t = 0).
struct TraceRow {
  Index t = 0;
  double elapsed_s = 0;
  double f_x = kMissing;
  double g_x = kMissing;
  double f_z = kMissing;
  double g_z = kMissing;
  double sigma_t = kMissing;
  double alpha_t = kMissing;
  double S_t = kMissing;
};

struct TraceHeader {
  std::string solver;
  std::string instance;
  std::map<std::string, std::string> config;
  std::uint64_t seed = 0;
  std::string start_time;
  std::optional<double> f_opt;
  std::optional<double> g_opt;
  /// Where f_opt / g_opt came from ("analytic", "estimate_g_opt", ...).
  std::string f_opt_source;
  std::string g_opt_source;
  /// Empty unless the run stopped on an exception.
  std::string error;
  std::string stop_reason;
};

struct RunTrace {
  TraceHeader header;
  std::vector<TraceRow> rows;
};

/// Names of the stored columns, in file order.
const std::vector<std::string>& trace_columns();

/// Stored column or one of the derived gap columns f_x_gap, g_x_gap, f_z_gap,
/// g_z_gap (value minus f_opt / g_opt from the header). NaN when undefined.
double trace_value(const RunTrace& trace, const TraceRow& row, const std::string& column);

bool is_trace_column(const std::string& column);

}  // namespace ircg
