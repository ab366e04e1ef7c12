#include "ircg/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ircg {

void BaselineParams::validate() const {
  switch (kind) {
    case BaselineKind::IrPg:
      schedule.validate();
      require(alpha_tilde > 0 && theta > 0 && theta < 1 && eta > 0, ErrorCode::InvalidArgument,
              "IR-PG needs alpha_tilde > 0, theta in (0, 1), eta > 0");
      if (irpg_mode == IrpgStepMode::Armijo) {
        require(eta < 1, ErrorCode::InvalidArgument, "Armijo backtracking needs eta < 1");
      }
      require(fixed_alpha > 0, ErrorCode::InvalidArgument, "IR-PG needs fixed_alpha > 0");
      break;
    case BaselineKind::CgBio:
      require(eps_g > 0, ErrorCode::InvalidArgument, "CG-BiO needs eps_g > 0");
      break;
    case BaselineKind::BiSg:
      require(bisg_alpha > 0.5 && bisg_alpha < 1, ErrorCode::InvalidArgument, "Bi-SG needs alpha in (1/2, 1)");
      require(bisg_c > 0, ErrorCode::InvalidArgument, "Bi-SG needs c > 0");
      break;
  }
}

std::string to_string(BaselineKind kind) {
  switch (kind) {
    case BaselineKind::IrPg: return "irpg";
    case BaselineKind::CgBio: return "cgbio";
    case BaselineKind::BiSg: return "bisg";
  }
  return "unknown";
}

BaselineKind parse_baseline_kind(const std::string& name) {
  if (name == "irpg") return BaselineKind::IrPg;
  if (name == "cgbio") return BaselineKind::CgBio;
  if (name == "bisg") return BaselineKind::BiSg;
  throw Error(ErrorCode::ConfigError, "unknown baseline '" + name + "'");
}

std::string to_string(IrpgStepMode mode) {
  switch (mode) {
    case IrpgStepMode::Armijo: return "armijo";
    case IrpgStepMode::Power: return "power";
    case IrpgStepMode::Fixed: return "fixed";
  }
  return "unknown";
}

IrpgStepMode parse_irpg_mode(const std::string& name) {
  if (name == "armijo") return IrpgStepMode::Armijo;
  if (name == "power") return IrpgStepMode::Power;
  if (name == "fixed") return IrpgStepMode::Fixed;
  throw Error(ErrorCode::ConfigError, "unknown IR-PG step mode '" + name + "'");
}

namespace {

const PointFn& projection(const BilevelProblem& problem) {
  if (!problem.proj) throw Error(ErrorCode::MissingProjection, "problem " + problem.id + " has no projection");
  return problem.proj;
}

}  // namespace

SolverState irpg_step(const SolverState& state, const BilevelProblem& problem, const BaselineParams& params) {
  const PointFn& proj = projection(problem);
  const double sigma = sigma_at(params.schedule, state.t);
  const Point grad = grad_phi(problem, sigma, state.x);

  double alpha = params.fixed_alpha;
  Point next;
  switch (params.irpg_mode) {
    case IrpgStepMode::Fixed:
      next = proj(Point(state.x - alpha * grad));
      break;
    case IrpgStepMode::Power:
      alpha = params.alpha_tilde * std::pow(static_cast<double>(state.t + 1), -params.eta);
      next = proj(Point(state.x - alpha * grad));
      break;
    case IrpgStepMode::Armijo: {
      const double phi0 = eval_phi(problem, sigma, state.x);
      // Near stationarity both sides agree to roundoff; the SVD-based
      // projection alone perturbs Phi by a few ulps of |Phi|.
      const double roundoff = 64 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(phi0));
      alpha = params.alpha_tilde;
      for (int m = 0;; ++m) {
        next = proj(Point(state.x - alpha * grad));
        const double decrease = frobenius_inner(grad, Point(next - state.x));
        if (eval_phi(problem, sigma, next) <= phi0 + params.theta * decrease + roundoff) break;
        if (m + 1 >= params.armijo_cap) {
          throw Error(ErrorCode::NonConvergence, "IR-PG backtracking exceeded " +
                                                     std::to_string(params.armijo_cap) + " halvings");
        }
        alpha *= params.eta;
      }
      break;
    }
  }
  require_same_shape(next, state.x, "projection output");

  SolverState out;
  out.t = state.t + 1;
  out.x = std::move(next);
  out.z = out.x;
  out.last_alpha = alpha;
  out.last_sigma = sigma;
  return out;
}

SolverState cgbio_step(const SolverState& state, const BilevelProblem& problem, const BaselineParams& params) {
  require(static_cast<bool>(problem.sliced_lmo), ErrorCode::InvalidArgument,
          "problem " + problem.id + " has no sliced LMO");
  require(params.g_ref.has_value(), ErrorCode::InvalidArgument, "CG-BiO needs g at the warm start");
  const Point gf = problem.grad_f(state.x);
  const Point gg = problem.grad_g(state.x);
  const double b = frobenius_inner(gg, state.x) + *params.g_ref - eval_g_checked(problem, state.x);
  const Point v = problem.sliced_lmo(gf, gg, b);
  require_same_shape(v, state.x, "sliced LMO output");
  const Point dir = v - state.x;

  double alpha = 0;
  switch (params.cgbio_step.kind) {
    case StepKind::OpenLoop:
      alpha = step_open_loop(state.t);
      break;
    case StepKind::ClosedLoop:
      alpha = step_closed_loop(frobenius_inner(gf, dir), dir.squaredNorm(), problem.L_f);
      break;
    case StepKind::LineSearch:
      alpha = step_line_search([&](double a) { return problem.eval_f(Point(state.x + a * dir)); },
                               params.cgbio_step.line_search_tol, params.cgbio_step.line_search_cap,
                               step_open_loop(state.t));
      break;
  }
  SolverState out;
  out.t = state.t + 1;
  out.x = state.x + alpha * dir;
  out.z = out.x;
  out.last_alpha = alpha;
  return out;
}

SolverState bisg_step(const SolverState& state, const BilevelProblem& problem, const BaselineParams& params) {
  const PointFn& proj = projection(problem);
  const Point y = proj(Point(state.x - params.bisg_c * problem.grad_g(state.x)));
  const double outer = params.bisg_c * std::pow(static_cast<double>(state.t + 1), -params.bisg_alpha);
  SolverState out;
  out.t = state.t + 1;
  out.x = proj(Point(y - outer * problem.grad_f(y)));
  require_same_shape(out.x, state.x, "projection output");
  out.z = out.x;
  out.last_alpha = outer;
  return out;
}

Point cgbio_warm_start(const BilevelProblem& problem, double eps_g, Index max_iters) {
  require(eps_g > 0, ErrorCode::InvalidArgument, "cgbio_warm_start needs eps_g > 0");
  Point x = problem.x0;
  for (Index t = 0;; ++t) {
    const Point grad = problem.grad_g(x);
    const Point dir = problem.lmo(grad) - x;
    const double gap = -frobenius_inner(grad, dir);
    if (gap <= eps_g / 2) return x;
    if (t >= max_iters) {
      throw Error(ErrorCode::NonConvergence, "CG-BiO warm start did not reach eps_g / 2");
    }
    x += step_open_loop(t) * dir;
  }
}

RunTrace solve_baseline(const BilevelProblem& problem, BaselineParams params, const RunControl& control,
                        const std::vector<Observer>& observers) {
  params.validate();
  SolverState state = initial_state(problem);
  TraceHeader header;
  header.solver = to_string(params.kind);
  std::function<SolverState(const SolverState&)> step;
  std::function<double(Index)> sigma_of;
  switch (params.kind) {
    case BaselineKind::IrPg:
      projection(problem);
      header.solver += "-" + to_string(params.irpg_mode);
      header.config["schedule.varsigma"] = std::to_string(params.schedule.varsigma);
      header.config["schedule.p"] = std::to_string(params.schedule.p);
      step = [&](const SolverState& s) { return irpg_step(s, problem, params); };
      sigma_of = [&](Index t) { return sigma_at(params.schedule, t); };
      break;
    case BaselineKind::CgBio:
      state.x = cgbio_warm_start(problem, params.eps_g);
      state.z = state.x;
      if (!params.g_ref) params.g_ref = eval_g_checked(problem, state.x);
      header.config["solver.eps_g"] = std::to_string(params.eps_g);
      step = [&](const SolverState& s) { return cgbio_step(s, problem, params); };
      break;
    case BaselineKind::BiSg:
      projection(problem);
      header.solver += "-simplified";
      header.config["solver.bisg_alpha"] = std::to_string(params.bisg_alpha);
      header.config["solver.bisg_c"] = std::to_string(params.bisg_c);
      step = [&](const SolverState& s) { return bisg_step(s, problem, params); };
      break;
  }
  RunControl ctl = control;
  ctl.record_z = false;
  return run_loop(problem, std::move(header), std::move(state), step, sigma_of, ctl, observers);
}

}  // namespace ircg
