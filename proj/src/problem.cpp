#include "ircg/problem.hpp"

#include <cmath>

namespace ircg {

void InstanceMetadata::set(const std::string& field, double value, const std::string& source) {
  if (field == "f_opt") f_opt = value;
  else if (field == "g_opt") g_opt = value;
  else if (field == "min_f_over_X") min_f_over_X = value;
  else if (field == "kappa") kappa = value;
  else if (field == "G_f") G_f = value;
  else if (field == "alpha_f") alpha_f = value;
  else if (field == "alpha_X") alpha_X = value;
  else throw Error(ErrorCode::InvalidArgument, "unknown metadata field " + field);
  provenance[field] = source;
}

void BilevelProblem::validate() const {
  require(eval_f && grad_f && eval_g && grad_g && lmo && contains, ErrorCode::InvalidArgument,
          "problem " + id + " is missing a mandatory callable");
  require(x0.size() > 0, ErrorCode::InvalidArgument, "problem " + id + " has no initial point");
  require(L_f > 0 && L_g > 0 && diameter_D > 0, ErrorCode::InvalidArgument,
          "problem " + id + " needs positive L_f, L_g, D");
}

namespace {

double finite_or_throw(double v, const char* what) {
  if (!std::isfinite(v)) throw Error(ErrorCode::NonFiniteValue, std::string(what) + " is not finite");
  return v;
}

}  // namespace

double eval_f_checked(const BilevelProblem& problem, const Point& x) {
  require_same_shape(x, problem.x0, "eval_f");
  return finite_or_throw(problem.eval_f(x), "f(x)");
}

double eval_g_checked(const BilevelProblem& problem, const Point& x) {
  require_same_shape(x, problem.x0, "eval_g");
  return finite_or_throw(problem.eval_g(x), "g(x)");
}

double eval_phi(const BilevelProblem& problem, double sigma, const Point& x) {
  require(sigma > 0, ErrorCode::InvalidArgument, "eval_phi needs sigma > 0");
  const double f = eval_f_checked(problem, x);
  const double g = eval_g_checked(problem, x);
  return sigma * f + g;
}

Point grad_phi(const BilevelProblem& problem, double sigma, const Point& x) {
  require(sigma > 0, ErrorCode::InvalidArgument, "grad_phi needs sigma > 0");
  require_same_shape(x, problem.x0, "grad_phi");
  Point out = sigma * problem.grad_f(x) + problem.grad_g(x);
  require_same_shape(out, problem.x0, "grad_phi result");
  require(out.allFinite(), ErrorCode::NonFiniteValue, "grad_phi result is not finite");
  return out;
}

GradCheckReport check_gradients(const BilevelProblem& problem, int samples, double h, std::uint64_t seed) {
  require(samples >= 1, ErrorCode::InvalidArgument, "check_gradients needs samples >= 1");
  require(h > 0, ErrorCode::InvalidArgument, "check_gradients needs h > 0");
  require(static_cast<bool>(problem.sample), ErrorCode::InvalidArgument,
          "problem " + problem.id + " cannot sample points");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);

  auto rel_error = [&](const ScalarFn& fn, const PointFn& grad, const Point& x, const Point& d) {
    const double plus = fn(x + h * d);
    const double minus = fn(x - h * d);
    const Point gx = grad(x);
    if (!std::isfinite(plus) || !std::isfinite(minus) || !gx.allFinite()) {
      throw Error(ErrorCode::NonFiniteValue, "check_gradients hit a non-finite value");
    }
    const double fd = (plus - minus) / (2 * h);
    return std::abs(fd - frobenius_inner(gx, d)) / std::max(gx.norm(), 1.0);
  };

  GradCheckReport report;
  for (int k = 0; k < samples; ++k) {
    const Point x = problem.sample(rng);
    Point d(x.rows(), x.cols());
    for (Index i = 0; i < d.size(); ++i) d.data()[i] = normal(rng);
    d /= d.norm();
    report.max_rel_error_f = std::max(report.max_rel_error_f, rel_error(problem.eval_f, problem.grad_f, x, d));
    report.max_rel_error_g = std::max(report.max_rel_error_g, rel_error(problem.eval_g, problem.grad_g, x, d));
    report.points.push_back(x);
  }
  return report;
}

}  // namespace ircg
