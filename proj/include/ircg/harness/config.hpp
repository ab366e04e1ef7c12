#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ircg/baselines.hpp"
#include "ircg/problems.hpp"
#include "ircg/solver.hpp"

namespace ircg {

/// Flat key=value configuration. Keys live under run., schedule., solver. and
/// instance.; unknown keys and malformed values are ConfigError.
struct RunConfig {
  std::vector<std::string> solvers = {"ircg-open"};
  Index max_iters = 1000;
  double time_limit_s = 600;
  Index record_every = 1;
  std::uint64_t seed = 0;
  double g_opt_coarse = 1e-5;
  double g_opt_fine = 1e-12;

  RegSchedule schedule{0.05, 0.5};
  double line_search_tol = 1e-8;
  std::string irpg_mode = "armijo";
  double irpg_theta = 0.5;
  double irpg_alpha_tilde = 0.5;
  double irpg_eta = 0.5;
  double eps_g = 1e-4;
  double bisg_alpha = 1.0 / 1.99;
  double bisg_c = 1;

  std::string instance = "matrix_completion";
  // least_norm: Gaussian A (rows x cols) and b = A x for a Gaussian x.
  // matrix_completion: synthetic rows x cols, or ratings from `path`.
  Index rows = 60;
  Index cols = 40;
  Index rank = 3;
  double density = 0.25;
  double noise = 0.1;
  double delta = 5;
  double radius = 0;
  std::vector<double> f_center;
  std::vector<double> aq_diag;
  double kappa = 0;
  std::string path;

  /// Every key as given, for the trace header.
  std::map<std::string, std::string> raw;
};

RunConfig parse_config(const std::string& text, const std::string& name = "<config>");
RunConfig load_config(const std::string& path);
/// Applies one key=value pair; used by the parser and for overrides.
void apply_config_value(RunConfig& config, const std::string& key, const std::string& value);

/// Keys the parser accepts.
const std::vector<std::string>& config_keys();

/// Builds the configured instance; deterministic in config.seed.
BilevelProblem build_instance(const RunConfig& config);

}  // namespace ircg
