#include "ircg/trace.hpp"

#include <algorithm>

namespace ircg {

const std::vector<std::string>& trace_columns() {
  static const std::vector<std::string> names = {"t",   "elapsed_s", "f_x",     "g_x", "f_z",
                                                 "g_z", "sigma_t",   "alpha_t", "S_t"};
  return names;
}

bool is_trace_column(const std::string& column) {
  static const std::vector<std::string> derived = {"f_x_gap", "g_x_gap", "f_z_gap", "g_z_gap"};
  const auto& stored = trace_columns();
  return std::find(stored.begin(), stored.end(), column) != stored.end() ||
         std::find(derived.begin(), derived.end(), column) != derived.end();
}

double trace_value(const RunTrace& trace, const TraceRow& row, const std::string& column) {
  if (column == "t") return static_cast<double>(row.t);
  if (column == "elapsed_s") return row.elapsed_s;
  if (column == "f_x") return row.f_x;
  if (column == "g_x") return row.g_x;
  if (column == "f_z") return row.f_z;
  if (column == "g_z") return row.g_z;
  if (column == "sigma_t") return row.sigma_t;
  if (column == "alpha_t") return row.alpha_t;
  if (column == "S_t") return row.S_t;
  const auto& h = trace.header;
  auto gap = [](double v, const std::optional<double>& opt) { return opt ? v - *opt : kMissing; };
  if (column == "f_x_gap") return gap(row.f_x, h.f_opt);
  if (column == "g_x_gap") return gap(row.g_x, h.g_opt);
  if (column == "f_z_gap") return gap(row.f_z, h.f_opt);
  if (column == "g_z_gap") return gap(row.g_z, h.g_opt);
  throw Error(ErrorCode::InvalidArgument, "unknown trace column '" + column + "'");
}

}  // namespace ircg
