#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "ircg/problem.hpp"
#include "ircg/schedules.hpp"
#include "ircg/trace.hpp"

namespace ircg {

struct SolverState {
  Index t = 0;
  Point x;
  /// Averaged iterate; equals x at t = 0 where it is otherwise undefined.
  Point z;
  double S = 0;
  double last_alpha = kMissing;
  double last_sigma = kMissing;
};

SolverState initial_state(const BilevelProblem& problem);

struct SolverConfig {
  RegSchedule schedule;
  StepRule step_rule;
  Index max_iters = 1000;
  double time_limit_s = std::numeric_limits<double>::infinity();
  /// Rows are kept for t divisible by this and for the final iterate.
  Index record_every = 1;
  std::uint64_t seed = 0;

  void validate() const;
};

/// One iteration: v = lmo(sigma_t grad f + grad g), x += alpha (v - x), then
/// S_{t+1} = S_t + 2(t+1) sigma_t and
/// z_{t+1} = z_t + (t+1) sigma_t ((t+2) x_{t+1} - t x_t - 2 z_t) / S_{t+1}.
SolverState ircg_step(const SolverState& state, const BilevelProblem& problem, const SolverConfig& config);

/// The explicit convex combination defining z_t from x_1..x_t
/// (history[i - 1] = x_i). Test oracle for the recursion.
Point z_closed_form(const std::vector<Point>& history, const RegSchedule& schedule, Index t);
/// S_t as the explicit weight sum.
double s_closed_form(const RegSchedule& schedule, Index t);

using Observer = std::function<void(const SolverState&, const TraceRow&)>;

/// Thrown when a run stops on an error; carries the rows recorded so far.
class RunAborted : public Error {
 public:
  RunAborted(const Error& cause, RunTrace partial) : Error(cause), partial_(std::move(partial)) {}
  const RunTrace& partial() const noexcept { return partial_; }

 private:
  RunTrace partial_;
};

struct RunControl {
  Index max_iters = 1000;
  double time_limit_s = std::numeric_limits<double>::infinity();
  Index record_every = 1;
  bool record_z = true;
};

/// Shared iteration loop for IR-CG and the baselines. `step` maps the state
/// at t to the state at t + 1; `sigma_of` gives sigma_t for the trace.
RunTrace run_loop(const BilevelProblem& problem, TraceHeader header, SolverState state,
                  const std::function<SolverState(const SolverState&)>& step,
                  const std::function<double(Index)>& sigma_of, const RunControl& control,
                  const std::vector<Observer>& observers);

RunTrace solve(const BilevelProblem& problem, const SolverConfig& config, const std::vector<Observer>& observers = {});

struct CertificateInputs {
  /// f_opt - min over X of f.
  double F = 0;
  double D = 1;
  double L_f = 1;
  double L_g = 1;
  double varsigma = 1;
  double p = 0.5;
  std::optional<double> kappa;
  std::optional<double> G_f;
  std::optional<double> g0_gap;
};

struct CertificateConstants {
  double C_bound = 0;
  double V_bound = 0;
  std::optional<double> W_bound;
  CertificateInputs inputs;
};

/// C and V bounds for the power schedule; W as well when requested (needs
/// kappa, G_f and g0_gap, else MissingMetadata).
CertificateConstants certificate_constants(const CertificateInputs& inputs, bool want_w = false);

struct CertificateBounds {
  double inner = 0;
  double outer = 0;
  std::optional<double> inner_accelerated;
  std::optional<double> outer_accelerated;
};

/// Explicit bounds on g(z_t) - g_opt and f(z_t) - f_opt, plus the bounds on
/// g(x_t) - g_opt and f(x_t) - f_opt under quadratic growth when W is known.
CertificateBounds certificate_bounds_at(Index t, const CertificateConstants& constants);

struct GOptOptions {
  StepRule step_rule;
  Index max_iters = 1000000;
};

/// Single-level CG on g: stop on the surrogate gap <grad g(x), x - v> <= tol_coarse,
/// restart the step counter from that point and stop at tol_fine. Returns g at
/// the final point, which lies within tol_fine above g_opt.
double estimate_g_opt(const BilevelProblem& problem, double tol_coarse, double tol_fine, const GOptOptions& opts = {});

/// Accelerated projected gradient on g (adaptive restart) from x0, stopped by
/// the same surrogate gap, so g_opt <= result <= g_opt + tol as well. Used when
/// CG stalls on a high-rank face. MissingProjection without a projection,
/// NonConvergence at the cap.
double estimate_g_opt_projected(const BilevelProblem& problem, double tol, Index max_iters = 100000);

}  // namespace ircg
