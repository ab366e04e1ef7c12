#pragma once

#include <string>

#include "ircg/trace.hpp"

namespace ircg {

struct RateFit {
  std::string column;
  Index t_min = 0;
  Index t_max = 0;
  double slope = 0;
  double intercept = 0;
  double slope_stderr = 0;
  Index points = 0;
  /// Rows in the window whose value was <= 0 or missing.
  Index dropped = 0;
};

/// Least-squares fit of log(value) on log(t) over rows with t_min <= t <= t_max.
/// Needs at least 10 positive values, else InsufficientData.
RateFit rate_fit(const RunTrace& trace, const std::string& column, Index t_min, Index t_max);

}  // namespace ircg
