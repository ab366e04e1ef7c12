#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ircg/nuclear.hpp"
#include "ircg/problem.hpp"

namespace ircg {

struct Entry {
  Index i = 0;
  Index j = 0;
  double value = 0;
};

/// Observed entries, 0-based.
struct Observations {
  Index n_rows = 0;
  Index n_cols = 0;
  std::vector<Entry> entries;

  /// Throws InvalidArgument / DuplicateEntry / NonFiniteValue.
  void validate() const;
};

/// Pieces of the l2 ball that instances share.
Point ball_lmo(const Point& d, double radius);
Point ball_projection(const Point& x, double radius);
/// argmin <c, v> over ||v|| <= radius, <a, v> <= b. InfeasibleOracle when the
/// cut misses the ball.
Point ball_sliced_lmo(const Point& c, const Point& a, double b, double radius);

/// g = ||Ax - b||^2 / 2, f = ||x||^2 / 2 over the l2 ball of `radius`
/// (default 2 ||A^+ b||). RadiusTooSmall unless radius > ||A^+ b||.
BilevelProblem make_least_norm(const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                               std::optional<double> radius = std::nullopt);

/// g = x'Aq x - 2 bq'x over the unit ball, f = ||x - f_center||^2 / 2.
/// f_opt, g_opt, x_opt and G_f are analytic; kappa is stored only when given.
BilevelProblem make_ball_quadratic(const Eigen::MatrixXd& aq, const Eigen::VectorXd& bq,
                                   const Eigen::VectorXd& f_center, std::optional<double> kappa = std::nullopt);

/// Smallest sampled ratio (g(x) - g_opt) / dist(x, X_opt)^2 over the unit ball
/// for a ball_quadratic instance. An optimistic estimate of kappa.
double estimate_ball_quadratic_kappa(const Eigen::MatrixXd& aq, const Eigen::VectorXd& bq, int samples,
                                     std::uint64_t seed);

/// X = [-1, 1], g = x^2, f = (x - 1)^2 / 2. Solution x = 0, f_opt = 1/2.
BilevelProblem make_interval_quadratic();

/// Scalar instance on [-radius, radius] from plain callables.
BilevelProblem make_interval_problem(std::function<double(double)> f, std::function<double(double)> df,
                                     std::function<double(double)> g, std::function<double(double)> dg,
                                     double L_f, double L_g, double x0 = 0, double radius = 1,
                                     const std::string& id = "interval");

struct CompletionOptions {
  SpectralOptions spectral;
  SnbOptions snb;
};

/// f = ||U X||_F^2 / 2 with U = I - 11'/n, g = sum over observed (X_ij - M_ij)^2 / 2,
/// X the nuclear ball of radius delta.
BilevelProblem make_matrix_completion(const Observations& obs, double delta, const CompletionOptions& opts = {});

/// "UserID::MovieID::Rating::Timestamp" lines. ParseError carries the line number.
Observations load_ratings(const std::string& path, Index n_rows = 6040, Index n_cols = 3952);

/// Rank-`rank` Gaussian factors scaled by 1/sqrt(rank), plus noise, revealed
/// through a Bernoulli(density) mask.
Observations gen_synthetic_completion(Index n, Index p, Index rank, double density, double noise,
                                      std::uint64_t seed);

}  // namespace ircg
