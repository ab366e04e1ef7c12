#include "ircg/schedules.hpp"

#include <algorithm>
#include <cmath>

#include "ircg/numerics/brent.hpp"

namespace ircg {

double RegSchedule::operator()(Index t) const { return sigma_at(*this, t); }

void RegSchedule::validate() const {
  require(varsigma > 0 && std::isfinite(varsigma), ErrorCode::InvalidSchedule, "schedule needs varsigma > 0");
  require(p > 0 && p < 1, ErrorCode::InvalidSchedule, "schedule needs p in (0, 1)");
}

double sigma_at(const RegSchedule& schedule, Index t) {
  require(t >= 0, ErrorCode::InvalidArgument, "sigma_at needs t >= 0");
  return schedule.varsigma * std::pow(static_cast<double>(t + 1), -schedule.p);
}

namespace {

ScheduleReport scan(const std::function<double(Index)>& sigma, Index horizon) {
  require(horizon >= 10, ErrorCode::InvalidArgument, "verify_conditions needs horizon >= 10");
  ScheduleReport report;
  report.horizon = horizon;

  double prev = sigma(0);
  if (!(prev > 0) || !std::isfinite(prev)) throw Error(ErrorCode::InvalidSchedule, "sigma_0 is not positive");
  for (Index t = 1; t <= horizon + 1; ++t) {
    const double cur = sigma(t);
    if (!(cur > 0) || !(cur < prev)) {
      throw Error(ErrorCode::InvalidSchedule,
                  "sigma is not strictly decreasing and positive at t = " + std::to_string(t));
    }
    prev = cur;
  }
  report.condition1_ok = true;

  Index t0 = 0;
  for (Index t = horizon; t >= 0; --t) {
    const double lhs = static_cast<double>(t + 2) * sigma(t + 1);
    const double rhs = static_cast<double>(t + 1) * sigma(t);
    if (!(lhs > rhs)) {
      t0 = t + 1;
      break;
    }
  }
  report.condition2_first_index = t0;
  return report;
}

}  // namespace

ScheduleReport verify_conditions(const RegSchedule& schedule, Index horizon) {
  schedule.validate();
  ScheduleReport report = scan([&](Index t) { return sigma_at(schedule, t); }, horizon);
  // sigma_t / sigma_{t+1} - 1 = (1 + 1/(t+1))^p - 1, evaluated without cancellation.
  const double t = static_cast<double>(horizon);
  report.condition3_L_estimate = t * std::expm1(schedule.p * std::log1p(1.0 / (t + 1)));
  return report;
}

ScheduleReport verify_conditions(const std::function<double(Index)>& sigma, Index horizon) {
  ScheduleReport report = scan(sigma, horizon);
  report.condition3_L_estimate = static_cast<double>(horizon) * (sigma(horizon) / sigma(horizon + 1) - 1);
  return report;
}

std::string to_string(StepKind kind) {
  switch (kind) {
    case StepKind::OpenLoop: return "open-loop";
    case StepKind::ClosedLoop: return "closed-loop";
    case StepKind::LineSearch: return "line-search";
  }
  return "unknown";
}

StepKind parse_step_kind(const std::string& name) {
  if (name == "open-loop" || name == "open") return StepKind::OpenLoop;
  if (name == "closed-loop" || name == "closed") return StepKind::ClosedLoop;
  if (name == "line-search" || name == "ls") return StepKind::LineSearch;
  throw Error(ErrorCode::ConfigError, "unknown step rule '" + name + "'");
}

double step_open_loop(Index t) {
  require(t >= 0, ErrorCode::InvalidArgument, "step_open_loop needs t >= 0");
  return 2.0 / static_cast<double>(t + 2);
}

double step_closed_loop(double d, double s, double l_smooth) {
  require(l_smooth > 0, ErrorCode::InvalidArgument, "step_closed_loop needs L > 0");
  require(s >= 0, ErrorCode::InvalidArgument, "step_closed_loop needs s >= 0");
  if (d > 1e-12 * (1 + std::abs(d))) {
    throw Error(ErrorCode::InvalidDescent, "ascent direction, d = " + std::to_string(d));
  }
  if (s == 0) return 0;
  return std::clamp(-d / (l_smooth * s), 0.0, 1.0);
}

double step_line_search(const std::function<double(double)>& phi_on_segment, double tol, int cap,
                        std::optional<double> reference) {
  require(tol > 0, ErrorCode::InvalidArgument, "step_line_search needs tol > 0");
  const ScalarMinimum<double> best = brent_min(phi_on_segment, 0.0, 1.0, tol, cap);
  if (reference && phi_on_segment(*reference) < best.value) return *reference;
  return best.argmin;
}

}  // namespace ircg
