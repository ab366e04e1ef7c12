#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "ircg/types.hpp"

namespace ircg {

/// Known constants of an instance. Every populated field should have an entry
/// in `provenance` ("analytic", "long-run numeric", "supplied", ...).
struct InstanceMetadata {
  std::optional<double> f_opt;
  std::optional<double> g_opt;
  std::optional<double> min_f_over_X;
  std::optional<double> kappa;
  std::optional<double> G_f;
  std::optional<double> alpha_f;
  std::optional<double> alpha_X;
  std::optional<Point> x_opt;
  std::map<std::string, std::string> provenance;

  void set(const std::string& field, double value, const std::string& source);
};

using ScalarFn = std::function<double(const Point&)>;
using PointFn = std::function<Point(const Point&)>;
/// argmin <c, v> over v in X with <a, v> <= b.
using SlicedLmoFn = std::function<Point(const Point& c, const Point& a, double b)>;

struct BilevelProblem {
  std::string id;
  ScalarFn eval_f;
  PointFn grad_f;
  ScalarFn eval_g;
  PointFn grad_g;
  PointFn lmo;
  /// Empty when the instance has no projection.
  PointFn proj;
  /// Empty when the instance has no sliced LMO.
  SlicedLmoFn sliced_lmo;
  std::function<bool(const Point&, double tol)> contains;
  /// Draws a point of X; used for gradient checks and property tests.
  std::function<Point(std::mt19937_64&)> sample;
  Point x0;
  double L_f = 1;
  double L_g = 1;
  double diameter_D = 1;
  InstanceMetadata metadata;

  Index rows() const { return x0.rows(); }
  Index cols() const { return x0.cols(); }
  Layout layout() const { return layout_of(x0); }
  bool has_projection() const { return static_cast<bool>(proj); }

  /// Throws InvalidArgument when a mandatory member is missing or a constant
  /// is not positive.
  void validate() const;
};

/// Default membership tolerance, absolute on the defining inequality.
inline constexpr double kMembershipTol = 1e-8;

double eval_f_checked(const BilevelProblem& problem, const Point& x);
double eval_g_checked(const BilevelProblem& problem, const Point& x);

/// sigma f(x) + g(x).
double eval_phi(const BilevelProblem& problem, double sigma, const Point& x);
/// sigma grad f(x) + grad g(x).
Point grad_phi(const BilevelProblem& problem, double sigma, const Point& x);

struct GradCheckReport {
  double max_rel_error_f = 0;
  double max_rel_error_g = 0;
  std::vector<Point> points;
};

/// Directional central differences at `samples` random points of X. The
/// relative error at a point is |fd - <grad, d>| / max(||grad||, 1) for a unit
/// random direction d.
GradCheckReport check_gradients(const BilevelProblem& problem, int samples, double h, std::uint64_t seed);

}  // namespace ircg
