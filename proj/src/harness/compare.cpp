#include "ircg/harness/compare.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <tuple>

#include "ircg/harness/trace_io.hpp"

namespace ircg {

std::vector<CompareRow> compare(const std::vector<RunTrace>& traces) {
  require(!traces.empty(), ErrorCode::InvalidArgument, "compare needs at least one trace");
  std::vector<CompareRow> out;
  for (const RunTrace& tr : traces) {
    CompareRow row;
    row.instance = tr.header.instance;
    row.solver = tr.header.solver;
    row.error = tr.header.error;
    if (!tr.rows.empty()) {
      row.iterations = tr.rows.back().t;
      row.wall_time_s = tr.rows.back().elapsed_s;
      row.outer_at_best = tr.rows.back().f_x;
      if (tr.header.g_opt) {
        for (const TraceRow& r : tr.rows) {
          const double gap = r.g_x - *tr.header.g_opt;
          if (std::isnan(row.best_inner_gap) || gap < row.best_inner_gap) {
            row.best_inner_gap = gap;
            row.outer_at_best = r.f_x;
          }
        }
      }
    }
    out.push_back(row);
  }
  std::stable_sort(out.begin(), out.end(), [](const CompareRow& a, const CompareRow& b) {
    return std::tie(a.instance, a.solver) < std::tie(b.instance, b.solver);
  });
  return out;
}

namespace {

std::string short_number(double v) {
  if (std::isnan(v)) return "-";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

std::string format_compare_text(const std::vector<CompareRow>& rows) {
  const std::vector<std::string> head = {"instance", "solver", "iterations", "best_inner_gap", "outer_at_best",
                                         "wall_time_s"};
  std::vector<std::vector<std::string>> cells;
  for (const CompareRow& r : rows) {
    cells.push_back({r.instance, r.solver + (r.error.empty() ? "" : " (error)"), std::to_string(r.iterations),
                     short_number(r.best_inner_gap), short_number(r.outer_at_best), short_number(r.wall_time_s)});
  }
  std::vector<std::size_t> width(head.size());
  for (std::size_t c = 0; c < head.size(); ++c) {
    width[c] = head[c].size();
    for (const auto& line : cells) width[c] = std::max(width[c], line[c].size());
  }
  std::ostringstream out;
  auto emit = [&](const std::vector<std::string>& line) {
    for (std::size_t c = 0; c < line.size(); ++c) {
      // Text columns left-aligned, numbers right-aligned.
      const std::string pad(width[c] - line[c].size(), ' ');
      out << (c ? "  " : "") << (c < 2 ? line[c] + pad : pad + line[c]);
    }
    out << '\n';
  };
  emit(head);
  std::string prev;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i > 0 && rows[i].instance != prev) out << '\n';
    prev = rows[i].instance;
    emit(cells[i]);
  }
  return out.str();
}

std::string format_compare_csv(const std::vector<CompareRow>& rows) {
  std::ostringstream out;
  out << "instance,solver,iterations,best_inner_gap,outer_at_best,wall_time_s,error\n";
  for (const CompareRow& r : rows) {
    std::string err = r.error;
    std::replace(err.begin(), err.end(), ',', ';');
    out << r.instance << ',' << r.solver << ',' << r.iterations << ',' << format_number(r.best_inner_gap) << ','
        << format_number(r.outer_at_best) << ',' << format_number(r.wall_time_s) << ',' << err << '\n';
  }
  return out.str();
}

}  // namespace ircg
