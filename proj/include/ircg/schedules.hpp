#pragma once

#include <functional>
#include <optional>
#include <string>

#include "ircg/types.hpp"

namespace ircg {

/// sigma_t = varsigma (t + 1)^(-p).
struct RegSchedule {
  double varsigma = 1;
  double p = 0.5;

  double operator()(Index t) const;
  void validate() const;
};

double sigma_at(const RegSchedule& schedule, Index t);

struct ScheduleReport {
  bool condition1_ok = false;
  /// Smallest t0 with (t+2) sigma_{t+1} > (t+1) sigma_t for all t0 <= t <= horizon;
  /// horizon + 1 when the inequality fails at the horizon itself.
  Index condition2_first_index = 0;
  double condition3_L_estimate = 0;
  Index horizon = 0;
};

/// Numeric sampling of the three schedule conditions up to `horizon`; a sanity
/// check, not a proof. Throws InvalidSchedule when sigma is not strictly
/// decreasing and positive.
ScheduleReport verify_conditions(const RegSchedule& schedule, Index horizon);
ScheduleReport verify_conditions(const std::function<double(Index)>& sigma, Index horizon);

enum class StepKind { OpenLoop, ClosedLoop, LineSearch };

struct StepRule {
  StepKind kind = StepKind::OpenLoop;
  double line_search_tol = 1e-8;
  int line_search_cap = 100;
};

std::string to_string(StepKind kind);
StepKind parse_step_kind(const std::string& name);

/// 2 / (t + 2).
double step_open_loop(Index t);

/// argmin over [0, 1] of alpha d + (L / 2) alpha^2 s. Throws InvalidDescent when
/// d > 1e-12 (1 + |d|).
double step_closed_loop(double d, double s, double l_smooth);

/// Bounded Brent on [0, 1]. When `reference` is given, the returned alpha is
/// never worse than it.
double step_line_search(const std::function<double(double)>& phi_on_segment, double tol = 1e-8, int cap = 100,
                        std::optional<double> reference = std::nullopt);

}  // namespace ircg
