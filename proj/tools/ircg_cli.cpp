#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>

#include "ircg/harness/compare.hpp"
#include "ircg/harness/config.hpp"
#include "ircg/harness/plot.hpp"
#include "ircg/harness/rate_fit.hpp"
#include "ircg/harness/run.hpp"
#include "ircg/harness/trace_io.hpp"
#include "ircg/nuclear.hpp"

namespace {

using namespace ircg;

struct CommonFlags {
  std::string config;
  std::string out_dir = "traces";
  std::optional<std::uint64_t> seed;
  std::optional<double> time_limit_s;
};

void add_common(CLI::App* app, CommonFlags& flags) {
  app->add_option("--config", flags.config, "key=value config file")->required()->check(CLI::ExistingFile);
  app->add_option("--out-dir", flags.out_dir, "directory for trace files");
  app->add_option("--seed", flags.seed, "overrides run.seed");
  app->add_option("--time-limit-s", flags.time_limit_s, "overrides run.time_limit_s");
}

RunConfig resolve(const CommonFlags& flags) {
  RunConfig config = load_config(flags.config);
  if (flags.seed) apply_config_value(config, "run.seed", std::to_string(*flags.seed));
  if (flags.time_limit_s) apply_config_value(config, "run.time_limit_s", format_number(*flags.time_limit_s));
  return config;
}

int report(const RunOutcome& outcome) {
  for (std::size_t k = 0; k < outcome.traces.size(); ++k) {
    const auto& tr = outcome.traces[k];
    std::cout << outcome.trace_paths[k] << "  " << tr.header.solver << "  iterations="
              << (tr.rows.empty() ? 0 : tr.rows.back().t);
    if (!tr.header.error.empty()) std::cout << "  error: " << tr.header.error;
    std::cout << '\n';
  }
  return outcome.failures == 0 ? 0 : 2;
}

std::vector<RunTrace> read_all(const std::vector<std::string>& paths) {
  std::vector<RunTrace> out;
  for (const auto& p : paths) out.push_back(read_trace(p));
  return out;
}

/// Quick randomized checks of the matrix oracles against dense decompositions.
int oracle_selftest(std::uint64_t seed, int trials) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  auto random_matrix = [&](Index r, Index c) {
    Eigen::MatrixXd m(r, c);
    for (Index i = 0; i < m.size(); ++i) m.data()[i] = normal(rng);
    return m;
  };
  int lmo_fail = 0, snb_fail = 0, proj_fail = 0;
  double worst_lmo = 0, worst_gap = 0, worst_vi = 0;
  for (int k = 0; k < trials; ++k) {
    const Eigen::MatrixXd c = random_matrix(6, 5);
    const double delta = 1 + std::abs(normal(rng));
    const double sigma = Eigen::JacobiSVD<Eigen::MatrixXd>(c).singularValues()(0);
    const double lmo_err = std::abs(c.cwiseProduct(lmo_nuclear(c, delta)).sum() + delta * sigma) / (delta * sigma);
    worst_lmo = std::max(worst_lmo, lmo_err);
    lmo_fail += lmo_err > 1e-8;

    const Eigen::MatrixXd a = random_matrix(6, 5);
    const double sigma_a = Eigen::JacobiSVD<Eigen::MatrixXd>(a).singularValues()(0);
    const double b = -delta * sigma_a + 2 * delta * sigma_a * std::uniform_real_distribution<double>(0, 1)(rng);
    const auto sol = snb_lo(OracleMatrixProblem<double>{c, a, b, delta});
    const double gap = std::abs(sol.primal_value - sol.dual_value) / (1 + std::abs(sol.dual_value));
    worst_gap = std::max(worst_gap, gap);
    snb_fail += gap > 1e-6 || nuclear_norm(sol.v) > delta + 1e-8 || a.cwiseProduct(sol.v).sum() > b + 1e-8;

    const Eigen::MatrixXd x = 3 * random_matrix(6, 5);
    const Eigen::MatrixXd px = project_nuclear(x, delta);
    Eigen::MatrixXd z = random_matrix(6, 5);
    z *= delta * std::uniform_real_distribution<double>(0, 1)(rng) / nuclear_norm(z);
    const double vi = (x - px).cwiseProduct(z - px).sum();
    worst_vi = std::max(worst_vi, vi);
    proj_fail += vi > 1e-8;
  }
  std::printf("%s lmo_nuclear objective: worst rel err %.3g over %d\n", lmo_fail ? "FAIL" : "PASS", worst_lmo, trials);
  std::printf("%s snb_lo certificate/feasibility: worst rel gap %.3g over %d\n", snb_fail ? "FAIL" : "PASS",
              worst_gap, trials);
  std::printf("%s project_nuclear variational inequality: worst %.3g over %d\n", proj_fail ? "FAIL" : "PASS",
              worst_vi, trials);
  return lmo_fail + snb_fail + proj_fail == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Projection-free bilevel optimization: IR-CG, baselines and benchmark harness"};
  app.require_subcommand(1);

  CommonFlags solve_flags;
  auto* solve_cmd = app.add_subcommand("solve", "run the first solver listed in run.solvers");
  add_common(solve_cmd, solve_flags);

  CommonFlags bench_flags;
  bool parallel = false;
  auto* bench_cmd = app.add_subcommand("bench", "run every solver in run.solvers on the configured instance");
  add_common(bench_cmd, bench_flags);
  bench_cmd->add_flag("--parallel", parallel, "run solvers on separate threads");

  std::string fit_trace, fit_column;
  Index fit_lo = 0, fit_hi = 0;
  auto* fit_cmd = app.add_subcommand("ratefit", "log-log slope of a trace column");
  fit_cmd->add_option("trace", fit_trace)->required()->check(CLI::ExistingFile);
  fit_cmd->add_option("--column", fit_column)->required();
  fit_cmd->add_option("--t-min", fit_lo)->required();
  fit_cmd->add_option("--t-max", fit_hi)->required();

  std::vector<std::string> cmp_traces;
  std::string cmp_csv;
  auto* cmp_cmd = app.add_subcommand("compare", "summary table over traces");
  cmp_cmd->add_option("traces", cmp_traces)->required()->check(CLI::ExistingFile);
  cmp_cmd->add_option("--csv", cmp_csv, "also write the table as CSV");

  std::vector<std::string> plot_traces, plot_columns;
  std::string plot_out = "plot.svg", plot_x = "t";
  bool plot_log_x = false;
  auto* plot_cmd = app.add_subcommand("plot", "SVG plot plus per-series data files");
  plot_cmd->add_option("traces", plot_traces)->required()->check(CLI::ExistingFile);
  plot_cmd->add_option("--columns", plot_columns)->required()->delimiter(',');
  plot_cmd->add_option("--out", plot_out);
  plot_cmd->add_option("--x", plot_x, "x column (t or elapsed_s)");
  plot_cmd->add_flag("--log-x", plot_log_x);

  std::uint64_t self_seed = 1;
  int self_trials = 200;
  auto* self_cmd = app.add_subcommand("oracle-selftest", "randomized checks of the nuclear-ball oracles");
  self_cmd->add_option("--seed", self_seed);
  self_cmd->add_option("--trials", self_trials);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*solve_cmd) {
      RunConfig config = resolve(solve_flags);
      config.solvers.resize(1);
      return report(run_config(config, solve_flags.out_dir));
    }
    if (*bench_cmd) return report(run_config(resolve(bench_flags), bench_flags.out_dir, parallel));
    if (*fit_cmd) {
      const RateFit fit = rate_fit(read_trace(fit_trace), fit_column, fit_lo, fit_hi);
      std::printf("column=%s window=[%lld,%lld] slope=%.6g stderr=%.3g intercept=%.6g points=%lld dropped=%lld\n",
                  fit.column.c_str(), static_cast<long long>(fit.t_min), static_cast<long long>(fit.t_max),
                  fit.slope, fit.slope_stderr, fit.intercept, static_cast<long long>(fit.points),
                  static_cast<long long>(fit.dropped));
      return 0;
    }
    if (*cmp_cmd) {
      const auto rows = compare(read_all(cmp_traces));
      std::cout << format_compare_text(rows);
      if (!cmp_csv.empty()) {
        std::ofstream out(cmp_csv);
        if (!out) throw Error(ErrorCode::IoError, "cannot write " + cmp_csv);
        out << format_compare_csv(rows);
      }
      return 0;
    }
    if (*plot_cmd) {
      PlotOptions opts;
      opts.x_column = plot_x;
      opts.log_x = plot_log_x;
      const PlotOutput out = emit_plot(read_all(plot_traces), plot_columns, plot_out, opts);
      std::cout << out.svg_path << '\n';
      for (const auto& s : out.sidecar_paths) std::cout << s << '\n';
      return 0;
    }
    if (*self_cmd) return oracle_selftest(self_seed, self_trials);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
