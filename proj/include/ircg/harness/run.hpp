#pragma once

#include <string>
#include <vector>

#include "ircg/harness/config.hpp"

namespace ircg {

/// Solver ids accepted in run.solvers.
const std::vector<std::string>& solver_names();

/// Runs one named solver on `problem` with the configured parameters. Errors
/// are recorded in the returned trace header instead of thrown.
RunTrace run_solver(const std::string& solver, const BilevelProblem& problem, const RunConfig& config);

/// Fills metadata.g_opt with estimate_g_opt when the instance has none.
/// Returns false (leaving it empty) if the estimate does not converge.
bool ensure_g_opt(BilevelProblem& problem, const RunConfig& config);

struct RunOutcome {
  std::vector<std::string> trace_paths;
  std::vector<RunTrace> traces;
  int failures = 0;
};

/// Builds the instance, then runs every configured solver and writes
/// "<out_dir>/<solver>__<instance>.csv" per run. With `parallel`, runs go to
/// separate threads.
RunOutcome run_config(const RunConfig& config, const std::string& out_dir, bool parallel = false);

}  // namespace ircg
