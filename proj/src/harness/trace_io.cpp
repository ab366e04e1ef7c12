#include "ircg/harness/trace_io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <vector>

namespace ircg {

std::string format_number(double v) {
  if (std::isnan(v)) return "";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '\n') out += "\\n";
    else if (c == '\\') out += "\\\\";
    else out += c;
  }
  return out;
}

std::string unescape(const std::string& s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '\\' && i + 1 < s.size()) {
      out += s[i + 1] == 'n' ? '\n' : s[i + 1];
      ++i;
    } else {
      out += s[i];
    }
  }
  return out;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

void write_trace(std::ostream& out, const RunTrace& trace) {
  const TraceHeader& h = trace.header;
  out << "# solver=" << escape(h.solver) << '\n';
  out << "# instance=" << escape(h.instance) << '\n';
  out << "# seed=" << h.seed << '\n';
  out << "# start_time=" << escape(h.start_time) << '\n';
  if (h.f_opt) out << "# f_opt=" << format_number(*h.f_opt) << '\n';
  if (h.g_opt) out << "# g_opt=" << format_number(*h.g_opt) << '\n';
  if (!h.f_opt_source.empty()) out << "# f_opt_source=" << escape(h.f_opt_source) << '\n';
  if (!h.g_opt_source.empty()) out << "# g_opt_source=" << escape(h.g_opt_source) << '\n';
  if (!h.stop_reason.empty()) out << "# stop_reason=" << escape(h.stop_reason) << '\n';
  if (!h.error.empty()) out << "# error=" << escape(h.error) << '\n';
  for (const auto& [k, v] : h.config) out << "# config." << k << '=' << escape(v) << '\n';

  const auto& cols = trace_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
  out << '\n';
  for (const TraceRow& r : trace.rows) {
    out << r.t << ',' << format_number(r.elapsed_s) << ',' << format_number(r.f_x) << ',' << format_number(r.g_x)
        << ',' << format_number(r.f_z) << ',' << format_number(r.g_z) << ',' << format_number(r.sigma_t) << ','
        << format_number(r.alpha_t) << ',' << format_number(r.S_t) << '\n';
  }
}

void write_trace(const std::string& path, const RunTrace& trace) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path);
  write_trace(out, trace);
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path);
}

RunTrace read_trace(std::istream& in, const std::string& name) {
  RunTrace trace;
  TraceHeader& h = trace.header;
  std::string line;
  std::size_t line_no = 0;
  bool have_columns = false;
  auto fail = [&](const std::string& why) {
    throw Error(ErrorCode::ParseError, name + ":" + std::to_string(line_no) + ": " + why);
  };
  auto number = [&](const std::string& s) -> double {
    if (s.empty()) return kMissing;
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size()) fail("bad number '" + s + "'");
    return v;
  };

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (have_columns) fail("header line after the column line");
      const std::string body = line.size() > 2 ? line.substr(2) : "";
      const auto eq = body.find('=');
      if (eq == std::string::npos) fail("header line without '='");
      const std::string key = body.substr(0, eq);
      const std::string value = unescape(body.substr(eq + 1));
      if (key == "solver") h.solver = value;
      else if (key == "instance") h.instance = value;
      else if (key == "seed") h.seed = std::strtoull(value.c_str(), nullptr, 10);
      else if (key == "start_time") h.start_time = value;
      else if (key == "f_opt") h.f_opt = number(value);
      else if (key == "g_opt") h.g_opt = number(value);
      else if (key == "f_opt_source") h.f_opt_source = value;
      else if (key == "g_opt_source") h.g_opt_source = value;
      else if (key == "stop_reason") h.stop_reason = value;
      else if (key == "error") h.error = value;
      else if (key.rfind("config.", 0) == 0) h.config[key.substr(7)] = value;
      else fail("unknown header key '" + key + "'");
      continue;
    }
    if (!have_columns) {
      if (split(line, ',') != trace_columns()) fail("unexpected column line '" + line + "'");
      have_columns = true;
      continue;
    }
    const auto fields = split(line, ',');
    if (fields.size() != trace_columns().size()) fail("expected " + std::to_string(trace_columns().size()) + " fields");
    TraceRow r;
    const double t = number(fields[0]);
    if (std::isnan(t) || t != std::floor(t)) fail("bad iteration index");
    r.t = static_cast<Index>(t);
    r.elapsed_s = number(fields[1]);
    r.f_x = number(fields[2]);
    r.g_x = number(fields[3]);
    r.f_z = number(fields[4]);
    r.g_z = number(fields[5]);
    r.sigma_t = number(fields[6]);
    r.alpha_t = number(fields[7]);
    r.S_t = number(fields[8]);
    if (!trace.rows.empty() && r.t <= trace.rows.back().t) fail("t is not strictly increasing");
    trace.rows.push_back(r);
  }
  if (!have_columns) throw Error(ErrorCode::ParseError, name + ": missing column line");
  return trace;
}

RunTrace read_trace(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
  return read_trace(in, path);
}

}  // namespace ircg
