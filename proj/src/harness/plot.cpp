#include "ircg/harness/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "ircg/harness/trace_io.hpp"

namespace ircg {

namespace {

struct Series {
  std::string label;
  std::vector<std::pair<double, double>> raw;
  // Axis coordinates (log10 where the axis is logarithmic).
  std::vector<std::pair<double, double>> points;
  std::vector<Index> dropped;
};

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

std::string stem(const std::string& path) {
  const auto dot = path.find_last_of('.');
  const auto slash = path.find_last_of('/');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) return path;
  return path.substr(0, dot);
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '<') out += "&lt;";
    else if (c == '>') out += "&gt;";
    else if (c == '&') out += "&amp;";
    else if (c == '"') out += "&quot;";
    else out += c;
  }
  return out;
}

std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

/// Tick positions in data units for an axis spanning [lo, hi] (log10 units when log).
std::vector<double> ticks(double lo, double hi, bool log) {
  std::vector<double> out;
  if (log) {
    const int step = std::max(1, static_cast<int>(std::ceil((hi - lo) / 8)));
    for (int e = static_cast<int>(std::ceil(lo)); e <= static_cast<int>(std::floor(hi)); e += step) out.push_back(e);
    if (out.empty()) out.push_back(lo);
    return out;
  }
  const double span = hi - lo;
  const double raw = span / 6;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    if (m * mag >= raw) {
      step = m * mag;
      break;
    }
  }
  for (double v = std::ceil(lo / step) * step; v <= hi + 1e-12 * span; v += step) out.push_back(v);
  return out;
}

}  // namespace

PlotOutput emit_plot(const std::vector<RunTrace>& traces, const std::vector<std::string>& columns,
                     const std::string& out_path, const PlotOptions& opts) {
  require(!traces.empty() && !columns.empty(), ErrorCode::InvalidArgument, "emit_plot needs traces and columns");
  for (const auto& c : columns) require(is_trace_column(c), ErrorCode::InvalidArgument, "unknown column " + c);
  require(is_trace_column(opts.x_column), ErrorCode::InvalidArgument, "unknown x column " + opts.x_column);

  bool log_y = true;
  for (const auto& c : columns) log_y = log_y && ends_with(c, "_gap");
  if (opts.log_y) log_y = *opts.log_y;

  std::vector<Series> series;
  for (const RunTrace& tr : traces) {
    for (const auto& col : columns) {
      Series s;
      s.label = tr.header.solver + " " + col + (tr.header.instance.empty() ? "" : " [" + tr.header.instance + "]");
      for (const TraceRow& row : tr.rows) {
        if (row.t < opts.t_min || row.t > opts.t_max) continue;
        const double x = trace_value(tr, row, opts.x_column);
        const double y = trace_value(tr, row, col);
        if (!std::isfinite(x) || !std::isfinite(y)) continue;
        if ((log_y && !(y > 0)) || (opts.log_x && !(x > 0))) {
          s.dropped.push_back(row.t);
          continue;
        }
        s.raw.emplace_back(x, y);
        s.points.emplace_back(opts.log_x ? std::log10(x) : x, log_y ? std::log10(y) : y);
      }
      series.push_back(std::move(s));
    }
  }
  std::size_t total = 0;
  for (const auto& s : series) total += s.points.size();
  if (total == 0) throw Error(ErrorCode::InsufficientData, "no plottable points after filtering");

  double x_lo = INFINITY, x_hi = -INFINITY, y_lo = INFINITY, y_hi = -INFINITY;
  for (const auto& s : series)
    for (const auto& [x, y] : s.points) {
      x_lo = std::min(x_lo, x);
      x_hi = std::max(x_hi, x);
      y_lo = std::min(y_lo, y);
      y_hi = std::max(y_hi, y);
    }
  if (x_hi == x_lo) x_hi = x_lo + 1;
  if (y_hi == y_lo) {
    y_lo -= 0.5;
    y_hi += 0.5;
  }

  const double width = 760, height = 480, left = 80, right = 220, top = 40, bottom = 60;
  const double pw = width - left - right, ph = height - top - bottom;
  auto px = [&](double x) { return left + (x - x_lo) / (x_hi - x_lo) * pw; };
  auto py = [&](double y) { return top + (1 - (y - y_lo) / (y_hi - y_lo)) * ph; };
  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2",
                                  "#7f7f7f"};

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!opts.title.empty()) {
    svg << "<text x=\"" << left + pw / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">"
        << xml_escape(opts.title) << "</text>\n";
  }
  svg << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
      << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (double tx : ticks(x_lo, x_hi, opts.log_x)) {
    const double X = px(tx);
    svg << "<line x1=\"" << X << "\" y1=\"" << top + ph << "\" x2=\"" << X << "\" y2=\"" << top + ph + 5
        << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << X << "\" y=\"" << top + ph + 18 << "\" text-anchor=\"middle\">"
        << (opts.log_x ? "1e" + tick_label(tx) : tick_label(tx)) << "</text>\n";
  }
  for (double ty : ticks(y_lo, y_hi, log_y)) {
    const double Y = py(ty);
    svg << "<line x1=\"" << left - 5 << "\" y1=\"" << Y << "\" x2=\"" << left << "\" y2=\"" << Y
        << "\" stroke=\"black\"/>\n";
    svg << "<line x1=\"" << left << "\" y1=\"" << Y << "\" x2=\"" << left + pw << "\" y2=\"" << Y
        << "\" stroke=\"#dddddd\"/>\n";
    svg << "<text x=\"" << left - 8 << "\" y=\"" << Y + 4 << "\" text-anchor=\"end\">"
        << (log_y ? "1e" + tick_label(ty) : tick_label(ty)) << "</text>\n";
  }
  svg << "<text x=\"" << left + pw / 2 << "\" y=\"" << height - 15 << "\" text-anchor=\"middle\">"
      << xml_escape(opts.x_column) << (opts.log_x ? " (log)" : "") << "</text>\n";
  svg << "<text x=\"18\" y=\"" << top + ph / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
      << top + ph / 2 << ")\">" << (log_y ? "value (log)" : "value") << "</text>\n";

  PlotOutput out;
  out.svg_path = out_path;
  const std::string base = stem(out_path);
  for (std::size_t k = 0; k < series.size(); ++k) {
    const Series& s = series[k];
    const char* color = palette[k % (sizeof palette / sizeof *palette)];
    if (!s.points.empty()) {
      svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
      for (const auto& [x, y] : s.points) svg << px(x) << ',' << py(y) << ' ';
      svg << "\"/>\n";
    }
    const double ly = top + 14 + 18 * static_cast<double>(k);
    svg << "<line x1=\"" << left + pw + 12 << "\" y1=\"" << ly - 4 << "\" x2=\"" << left + pw + 32 << "\" y2=\""
        << ly - 4 << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    svg << "<text x=\"" << left + pw + 38 << "\" y=\"" << ly << "\">" << xml_escape(s.label) << "</text>\n";

    const std::string side = base + "." + std::to_string(k) + ".dat";
    std::ofstream dat(side);
    if (!dat) throw Error(ErrorCode::IoError, "cannot write " + side);
    dat << "# series=" << s.label << '\n';
    dat << "# columns: " << opts.x_column << " value\n";
    for (Index t : s.dropped) dat << "# dropped t=" << t << " (non-positive on log axis)\n";
    for (const auto& [x, y] : s.raw) dat << format_number(x) << ' ' << format_number(y) << '\n';
    out.sidecar_paths.push_back(side);
  }
  svg << "</svg>\n";
  std::ofstream file(out_path);
  if (!file) throw Error(ErrorCode::IoError, "cannot write " + out_path);
  file << svg.str();
  return out;
}

}  // namespace ircg
