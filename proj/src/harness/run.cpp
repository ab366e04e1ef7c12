#include "ircg/harness/run.hpp"

#include <algorithm>
#include <filesystem>
#include <future>

#include "ircg/harness/trace_io.hpp"

namespace ircg {

const std::vector<std::string>& solver_names() {
  static const std::vector<std::string> names = {"ircg-open", "ircg-closed", "ircg-ls", "irpg", "cgbio", "bisg"};
  return names;
}

namespace {

RunControl control_of(const RunConfig& c) {
  RunControl ctl;
  ctl.max_iters = c.max_iters;
  ctl.time_limit_s = c.time_limit_s;
  ctl.record_every = c.record_every;
  return ctl;
}

}  // namespace

RunTrace run_solver(const std::string& solver, const BilevelProblem& problem, const RunConfig& c) {
  try {
    RunTrace trace;
    if (solver.rfind("ircg-", 0) == 0) {
      SolverConfig sc;
      sc.schedule = c.schedule;
      sc.step_rule.kind = parse_step_kind(solver.substr(5));
      sc.step_rule.line_search_tol = c.line_search_tol;
      sc.max_iters = c.max_iters;
      sc.time_limit_s = c.time_limit_s;
      sc.record_every = c.record_every;
      sc.seed = c.seed;
      trace = solve(problem, sc);
    } else {
      BaselineParams bp;
      bp.kind = parse_baseline_kind(solver);
      bp.schedule = c.schedule;
      bp.irpg_mode = parse_irpg_mode(c.irpg_mode);
      bp.theta = c.irpg_theta;
      bp.alpha_tilde = c.irpg_alpha_tilde;
      bp.eta = c.irpg_eta;
      bp.eps_g = c.eps_g;
      bp.bisg_alpha = c.bisg_alpha;
      bp.bisg_c = c.bisg_c;
      trace = solve_baseline(problem, bp, control_of(c));
    }
    trace.header.seed = c.seed;
    for (const auto& [k, v] : c.raw) trace.header.config[k] = v;
    return trace;
  } catch (const RunAborted& e) {
    RunTrace trace = e.partial();
    trace.header.seed = c.seed;
    for (const auto& [k, v] : c.raw) trace.header.config[k] = v;
    return trace;
  } catch (const Error& e) {
    RunTrace trace;
    trace.header.solver = solver;
    trace.header.instance = problem.id;
    trace.header.seed = c.seed;
    trace.header.error = e.what();
    trace.header.stop_reason = "error";
    for (const auto& [k, v] : c.raw) trace.header.config[k] = v;
    return trace;
  }
}

bool ensure_g_opt(BilevelProblem& problem, const RunConfig& config) {
  if (problem.metadata.g_opt) return true;
  const std::string tols = "coarse=" + format_number(config.g_opt_coarse) + " fine=" + format_number(config.g_opt_fine);
  GOptOptions opts;
  opts.max_iters = 20000;
  try {
    problem.metadata.set("g_opt", estimate_g_opt(problem, config.g_opt_coarse, config.g_opt_fine, opts),
                         "estimate_g_opt " + tols);
    return true;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NonConvergence) throw;
  }
  if (!problem.has_projection()) return false;
  try {
    problem.metadata.set("g_opt", estimate_g_opt_projected(problem, config.g_opt_fine),
                         "estimate_g_opt_projected tol=" + format_number(config.g_opt_fine));
    return true;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NonConvergence) throw;
    return false;
  }
}

RunOutcome run_config(const RunConfig& config, const std::string& out_dir, bool parallel) {
  for (const auto& s : config.solvers) {
    const auto& names = solver_names();
    if (std::find(names.begin(), names.end(), s) == names.end()) {
      throw Error(ErrorCode::ConfigError, "unknown solver '" + s + "'");
    }
  }
  BilevelProblem problem = build_instance(config);
  ensure_g_opt(problem, config);
  std::filesystem::create_directories(out_dir);

  RunOutcome outcome;
  if (parallel) {
    std::vector<std::future<RunTrace>> jobs;
    for (const auto& s : config.solvers) {
      jobs.push_back(std::async(std::launch::async, [&, s] { return run_solver(s, problem, config); }));
    }
    for (auto& j : jobs) outcome.traces.push_back(j.get());
  } else {
    for (const auto& s : config.solvers) outcome.traces.push_back(run_solver(s, problem, config));
  }
  for (std::size_t k = 0; k < outcome.traces.size(); ++k) {
    const RunTrace& tr = outcome.traces[k];
    const std::string path = out_dir + "/" + config.solvers[k] + "__" + problem.id + ".csv";
    write_trace(path, tr);
    outcome.trace_paths.push_back(path);
    if (!tr.header.error.empty()) ++outcome.failures;
  }
  return outcome;
}

}  // namespace ircg
