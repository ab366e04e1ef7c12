#include "ircg/harness/rate_fit.hpp"

#include <cmath>
#include <vector>

namespace ircg {

RateFit rate_fit(const RunTrace& trace, const std::string& column, Index t_min, Index t_max) {
  require(is_trace_column(column), ErrorCode::InvalidArgument, "unknown trace column '" + column + "'");
  require(t_min < t_max, ErrorCode::InvalidArgument, "rate_fit needs t_min < t_max");
  RateFit fit;
  fit.column = column;
  fit.t_min = t_min;
  fit.t_max = t_max;
  std::vector<double> xs, ys;
  for (const TraceRow& row : trace.rows) {
    if (row.t < t_min || row.t > t_max || row.t < 1) continue;
    const double v = trace_value(trace, row, column);
    if (!(v > 0) || !std::isfinite(v)) {
      ++fit.dropped;
      continue;
    }
    xs.push_back(std::log(static_cast<double>(row.t)));
    ys.push_back(std::log(v));
  }
  fit.points = static_cast<Index>(xs.size());
  if (fit.points < 10) {
    throw Error(ErrorCode::InsufficientData, "rate_fit on " + column + ": " + std::to_string(fit.points) +
                                                 " positive values in window, " + std::to_string(fit.dropped) +
                                                 " dropped");
  }
  const double n = static_cast<double>(xs.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  require(sxx > 0, ErrorCode::InsufficientData, "rate_fit needs at least two distinct t");
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ssr = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - fit.intercept - fit.slope * xs[i];
    ssr += r * r;
  }
  fit.slope_stderr = std::sqrt(ssr / (n - 2) / sxx);
  return fit;
}

}  // namespace ircg
