#include "ircg/solver.hpp"

#include <algorithm>
#include <cmath>
#include <ctime>
#include <iomanip>
#include <sstream>

namespace ircg {

SolverState initial_state(const BilevelProblem& problem) {
  problem.validate();
  SolverState state;
  state.x = problem.x0;
  state.z = problem.x0;
  return state;
}

void SolverConfig::validate() const {
  schedule.validate();
  require(max_iters >= 0, ErrorCode::InvalidArgument, "max_iters must be >= 0");
  require(record_every >= 1, ErrorCode::InvalidArgument, "record_every must be >= 1");
  require(time_limit_s > 0, ErrorCode::InvalidArgument, "time_limit_s must be > 0");
  require(step_rule.line_search_tol > 0, ErrorCode::InvalidArgument, "line-search tolerance must be > 0");
}

SolverState ircg_step(const SolverState& state, const BilevelProblem& problem, const SolverConfig& config) {
  const Index t = state.t;
  const double sigma = sigma_at(config.schedule, t);
  const Point grad = grad_phi(problem, sigma, state.x);
  const Point v = problem.lmo(grad);
  require_same_shape(v, state.x, "lmo output");
  require(v.allFinite(), ErrorCode::NonFiniteValue, "lmo output is not finite");
  const Point dir = v - state.x;

  double alpha = 0;
  switch (config.step_rule.kind) {
    case StepKind::OpenLoop:
      alpha = step_open_loop(t);
      break;
    case StepKind::ClosedLoop:
      alpha = step_closed_loop(frobenius_inner(grad, dir), dir.squaredNorm(),
                               sigma * problem.L_f + problem.L_g);
      break;
    case StepKind::LineSearch: {
      auto phi = [&](double a) { return eval_phi(problem, sigma, Point(state.x + a * dir)); };
      alpha = step_line_search(phi, config.step_rule.line_search_tol, config.step_rule.line_search_cap,
                               step_open_loop(t));
      break;
    }
  }

  SolverState next;
  next.t = t + 1;
  next.x = state.x + alpha * dir;
  const double tf = static_cast<double>(t);
  next.S = state.S + 2 * (tf + 1) * sigma;
  next.z = state.z + ((tf + 1) * sigma / next.S) * ((tf + 2) * next.x - tf * state.x - 2 * state.z);
  next.last_alpha = alpha;
  next.last_sigma = sigma;
  return next;
}

double s_closed_form(const RegSchedule& schedule, Index t) {
  const double tf = static_cast<double>(t);
  double s = (tf + 1) * tf * sigma_at(schedule, t);
  for (Index i = 1; i <= t; ++i) {
    const double fi = static_cast<double>(i);
    s += (fi + 1) * fi * (sigma_at(schedule, i - 1) - sigma_at(schedule, i));
  }
  return s;
}

Point z_closed_form(const std::vector<Point>& history, const RegSchedule& schedule, Index t) {
  require(t >= 1 && static_cast<Index>(history.size()) >= t, ErrorCode::InvalidArgument,
          "z_closed_form needs 1 <= t <= history length");
  const double tf = static_cast<double>(t);
  Point acc = (tf + 1) * tf * sigma_at(schedule, t) * history[t - 1];
  double total = (tf + 1) * tf * sigma_at(schedule, t);
  for (Index i = 1; i <= t; ++i) {
    const double fi = static_cast<double>(i);
    const double w = (fi + 1) * fi * (sigma_at(schedule, i - 1) - sigma_at(schedule, i));
    acc += w * history[i - 1];
    total += w;
  }
  return acc / total;
}

namespace {

std::string utc_now() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream out;
  out << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return out.str();
}

}  // namespace

RunTrace run_loop(const BilevelProblem& problem, TraceHeader header, SolverState state,
                  const std::function<SolverState(const SolverState&)>& step,
                  const std::function<double(Index)>& sigma_of, const RunControl& control,
                  const std::vector<Observer>& observers) {
  using Clock = std::chrono::steady_clock;
  RunTrace trace;
  trace.header = std::move(header);
  trace.header.instance = problem.id;
  if (trace.header.start_time.empty()) trace.header.start_time = utc_now();
  if (!trace.header.f_opt && problem.metadata.f_opt) {
    trace.header.f_opt = problem.metadata.f_opt;
    trace.header.f_opt_source = problem.metadata.provenance.count("f_opt") ? problem.metadata.provenance.at("f_opt")
                                                                           : "metadata";
  }
  if (!trace.header.g_opt && problem.metadata.g_opt) {
    trace.header.g_opt = problem.metadata.g_opt;
    trace.header.g_opt_source = problem.metadata.provenance.count("g_opt") ? problem.metadata.provenance.at("g_opt")
                                                                           : "metadata";
  }

  const auto start = Clock::now();
  auto elapsed = [&] { return std::chrono::duration<double>(Clock::now() - start).count(); };
  // Evaluation time is excluded from the clock so traces report solver cost.
  double eval_time = 0;

  auto record = [&](const SolverState& s) {
    const auto eval_start = Clock::now();
    TraceRow row;
    row.t = s.t;
    row.f_x = eval_f_checked(problem, s.x);
    row.g_x = eval_g_checked(problem, s.x);
    if (control.record_z && s.t >= 1) {
      row.f_z = eval_f_checked(problem, s.z);
      row.g_z = eval_g_checked(problem, s.z);
      row.S_t = s.S;
    }
    row.sigma_t = sigma_of ? sigma_of(s.t) : kMissing;
    row.alpha_t = s.last_alpha;
    eval_time += std::chrono::duration<double>(Clock::now() - eval_start).count();
    row.elapsed_s = std::max(0.0, elapsed() - eval_time);
    trace.rows.push_back(row);
    for (const auto& obs : observers) obs(s, row);
  };

  try {
    record(state);
    trace.header.stop_reason = "max_iters";
    while (state.t < control.max_iters) {
      if (elapsed() - eval_time >= control.time_limit_s) {
        trace.header.stop_reason = "time_limit";
        break;
      }
      state = step(state);
      if (state.t % control.record_every == 0 || state.t == control.max_iters) record(state);
    }
    if (trace.rows.back().t != state.t) record(state);
  } catch (const Error& e) {
    trace.header.error = e.what();
    trace.header.stop_reason = "error";
    throw RunAborted(e, std::move(trace));
  }
  return trace;
}

RunTrace solve(const BilevelProblem& problem, const SolverConfig& config, const std::vector<Observer>& observers) {
  config.validate();
  SolverState state = initial_state(problem);
  TraceHeader header;
  header.solver = "ircg-" + to_string(config.step_rule.kind);
  header.seed = config.seed;
  header.config["schedule.varsigma"] = std::to_string(config.schedule.varsigma);
  header.config["schedule.p"] = std::to_string(config.schedule.p);
  header.config["solver.step_rule"] = to_string(config.step_rule.kind);
  RunControl control{config.max_iters, config.time_limit_s, config.record_every, true};
  return run_loop(
      problem, std::move(header), std::move(state),
      [&](const SolverState& s) { return ircg_step(s, problem, config); },
      [&](Index t) { return sigma_at(config.schedule, t); }, control, observers);
}

CertificateConstants certificate_constants(const CertificateInputs& in, bool want_w) {
  require(in.p > 0 && in.p < 1, ErrorCode::InvalidArgument, "certificate_constants needs p in (0, 1)");
  require(in.varsigma > 0, ErrorCode::InvalidArgument, "certificate_constants needs varsigma > 0");
  require(in.F >= 0, ErrorCode::InvalidArgument, "certificate_constants needs F >= 0");
  require(in.D > 0 && in.L_f > 0 && in.L_g > 0, ErrorCode::InvalidArgument,
          "certificate_constants needs D, L_f, L_g > 0");
  CertificateConstants out;
  out.inputs = in;
  const double p = in.p;
  out.C_bound = (1 + 2 * p) * in.F + 2 * (in.varsigma * in.L_f + in.L_g) * in.D * in.D / in.varsigma;
  out.V_bound = 2 * p / std::min(1.0, 2 * (1 - p));
  if (want_w) {
    require(in.kappa.has_value() && in.G_f.has_value() && in.g0_gap.has_value(), ErrorCode::MissingMetadata,
            "W needs kappa, G_f and g(x0) - g_opt");
    require(*in.kappa > 0, ErrorCode::InvalidArgument, "kappa must be > 0");
    const double gf = *in.G_f;
    const double sigma0 = in.varsigma;
    const double a = 4 * (in.L_f * sigma0 + in.L_g) * in.D * in.D + gf * gf * in.varsigma * in.varsigma / *in.kappa;
    const double c = p * std::pow(2.0, std::min(2 * p + 2, 3.0)) * gf * in.varsigma / std::sqrt(*in.kappa);
    const double root = (c + std::sqrt(c * c + 4 * a)) / 2;
    out.W_bound = std::max(*in.g0_gap, root * root);
  }
  return out;
}

CertificateBounds certificate_bounds_at(Index t, const CertificateConstants& constants) {
  require(t >= 0, ErrorCode::InvalidArgument, "certificate_bounds_at needs t >= 0");
  const CertificateInputs& in = constants.inputs;
  const double p = in.p;
  const double tp1 = static_cast<double>(t + 1);
  const double smooth = 2 * (in.varsigma * in.L_f + in.L_g) * in.D * in.D;
  CertificateBounds out;
  out.outer = smooth / (in.varsigma * std::pow(tp1, 1 - p));
  out.inner = (in.varsigma * (1 + 2 * p) * in.F + smooth) * std::min(1 + 2 * p, 2.0) /
              (std::min(1.0, 2 * (1 - p)) * std::pow(tp1, p));
  if (constants.W_bound) {
    const double w = *constants.W_bound;
    out.inner_accelerated = w / std::pow(tp1, std::min(2 * p, 1.0));
    out.outer_accelerated = w / (2 * in.varsigma * std::pow(tp1, std::min(p, 1 - p)));
  }
  return out;
}

double estimate_g_opt(const BilevelProblem& problem, double tol_coarse, double tol_fine, const GOptOptions& opts) {
  require(tol_fine > 0 && tol_fine <= tol_coarse, ErrorCode::InvalidArgument,
          "estimate_g_opt needs 0 < tol_fine <= tol_coarse");
  problem.validate();
  Point x = problem.x0;
  Index total = 0;

  auto phase = [&](double tol) {
    for (Index t = 0;; ++t) {
      const Point grad = problem.grad_g(x);
      const Point v = problem.lmo(grad);
      const Point dir = v - x;
      const double gap = -frobenius_inner(grad, dir);
      if (gap <= tol) return;
      if (++total > opts.max_iters) {
        throw Error(ErrorCode::NonConvergence, "estimate_g_opt: surrogate gap " + std::to_string(gap) +
                                                   " above " + std::to_string(tol) + " after " +
                                                   std::to_string(opts.max_iters) + " iterations");
      }
      double alpha = 0;
      switch (opts.step_rule.kind) {
        case StepKind::OpenLoop:
          alpha = step_open_loop(t);
          break;
        case StepKind::ClosedLoop:
          alpha = step_closed_loop(-gap, dir.squaredNorm(), problem.L_g);
          break;
        case StepKind::LineSearch:
          alpha = step_line_search([&](double a) { return problem.eval_g(Point(x + a * dir)); },
                                   opts.step_rule.line_search_tol, opts.step_rule.line_search_cap,
                                   step_open_loop(t));
          break;
      }
      x += alpha * dir;
    }
  };
  phase(tol_coarse);
  phase(tol_fine);
  return eval_g_checked(problem, x);
}

double estimate_g_opt_projected(const BilevelProblem& problem, double tol, Index max_iters) {
  require(tol > 0, ErrorCode::InvalidArgument, "estimate_g_opt_projected needs tol > 0");
  problem.validate();
  if (!problem.proj) throw Error(ErrorCode::MissingProjection, "problem " + problem.id + " has no projection");
  const double step = 1 / problem.L_g;
  Point x = problem.x0, y = x;
  double theta = 1;
  for (Index it = 0;; ++it) {
    const Point grad = problem.grad_g(x);
    const double gap = frobenius_inner(grad, Point(x - problem.lmo(grad)));
    if (gap <= tol) return eval_g_checked(problem, x);
    if (it >= max_iters) {
      throw Error(ErrorCode::NonConvergence, "estimate_g_opt_projected: surrogate gap " + std::to_string(gap) +
                                                 " after " + std::to_string(max_iters) + " iterations");
    }
    const Point next = problem.proj(Point(y - step * problem.grad_g(y)));
    if (frobenius_inner(Point(next - x), Point(y - next)) > 0) {
      // Momentum points uphill: restart.
      theta = 1;
      x = y = next;
      continue;
    }
    const double theta_next = (1 + std::sqrt(1 + 4 * theta * theta)) / 2;
    y = next + ((theta - 1) / theta_next) * (next - x);
    x = next;
    theta = theta_next;
  }
}

}  // namespace ircg
