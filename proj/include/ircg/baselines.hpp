#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ircg/solver.hpp"

namespace ircg {

enum class BaselineKind { IrPg, CgBio, BiSg };

enum class IrpgStepMode {
  /// Backtracking alpha_tilde * eta^m with sufficient decrease theta on Phi_t.
  Armijo,
  /// alpha_tilde * (t + 1)^(-eta).
  Power,
  /// Constant fixed_alpha.
  Fixed,
};

struct BaselineParams {
  BaselineKind kind = BaselineKind::IrPg;

  RegSchedule schedule{0.05, 0.5};
  IrpgStepMode irpg_mode = IrpgStepMode::Armijo;
  double theta = 0.5;
  double alpha_tilde = 0.5;
  double eta = 0.5;
  double fixed_alpha = 0.5;
  int armijo_cap = 60;

  double eps_g = 1e-4;
  StepRule cgbio_step;
  /// g at the warm start; filled by solve_baseline when absent.
  std::optional<double> g_ref;

  double bisg_alpha = 1.0 / 1.99;
  double bisg_c = 1;

  void validate() const;
};

std::string to_string(BaselineKind kind);
BaselineKind parse_baseline_kind(const std::string& name);
std::string to_string(IrpgStepMode mode);
IrpgStepMode parse_irpg_mode(const std::string& name);

/// x+ = Proj(x - alpha_t (sigma_t grad f(x) + grad g(x))).
SolverState irpg_step(const SolverState& state, const BilevelProblem& problem, const BaselineParams& params);

/// v = argmin <grad f(x), v> over X with <grad g(x), v - x> <= g_ref - g(x),
/// then x+ = x + alpha_t (v - x).
SolverState cgbio_step(const SolverState& state, const BilevelProblem& problem, const BaselineParams& params);

/// y = Proj(x - c grad g(x)), x+ = Proj(y - c (t + 1)^(-alpha) grad f(y)).
SolverState bisg_step(const SolverState& state, const BilevelProblem& problem, const BaselineParams& params);

/// Single-level CG on g with 2 / (t + 2) steps from x0 until the surrogate gap
/// is at most eps_g / 2.
Point cgbio_warm_start(const BilevelProblem& problem, double eps_g, Index max_iters = 10000000);

RunTrace solve_baseline(const BilevelProblem& problem, BaselineParams params, const RunControl& control,
                        const std::vector<Observer>& observers = {});

}  // namespace ircg
