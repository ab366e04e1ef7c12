#pragma once

#include <iosfwd>
#include <string>

#include "ircg/trace.hpp"

namespace ircg {

/// CSV with "# key=value" header lines, then the column line, then one row per
/// record. Numbers use 17 significant digits; missing values are empty fields.
void write_trace(std::ostream& out, const RunTrace& trace);
void write_trace(const std::string& path, const RunTrace& trace);

/// Throws ParseError (with line number) on malformed input.
RunTrace read_trace(std::istream& in, const std::string& name = "<stream>");
RunTrace read_trace(const std::string& path);

/// 17-significant-digit rendering; empty for NaN.
std::string format_number(double v);

}  // namespace ircg
