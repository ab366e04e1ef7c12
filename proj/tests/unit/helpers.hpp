#pragma once

#include <Eigen/SVD>

#include <cmath>
#include <functional>
#include <limits>
#include <random>

#include "ircg/problem.hpp"
#include "ircg/problems.hpp"

namespace ircg::testing {

inline Eigen::MatrixXd gaussian(Index rows, Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd m(rows, cols);
  for (Index i = 0; i < m.size(); ++i) m.data()[i] = normal(rng);
  return m;
}

inline double uniform(std::mt19937_64& rng, double lo = 0, double hi = 1) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline double dense_sigma_max(const Eigen::MatrixXd& c) {
  return Eigen::JacobiSVD<Eigen::MatrixXd>(c).singularValues()(0);
}

inline double dense_nuclear_norm(const Eigen::MatrixXd& c) {
  return Eigen::JacobiSVD<Eigen::MatrixXd>(c).singularValues().sum();
}

/// Projection onto {y >= 0, 1'y <= delta} by enumerating supports and whether
/// the cap is active; the projection is the nearest feasible candidate.
inline Eigen::VectorXd brute_force_simplex_cap(const Eigen::VectorXd& x, double delta) {
  const int k = static_cast<int>(x.size());
  Eigen::VectorXd best = Eigen::VectorXd::Zero(k);
  double best_dist = x.squaredNorm();
  for (unsigned mask = 1; mask < (1u << k); ++mask) {
    double sum = 0;
    int count = 0;
    for (int i = 0; i < k; ++i) {
      if (mask & (1u << i)) {
        sum += x(i);
        ++count;
      }
    }
    for (int cap = 0; cap < 2; ++cap) {
      const double shift = cap ? (sum - delta) / count : 0.0;
      Eigen::VectorXd y = Eigen::VectorXd::Zero(k);
      for (int i = 0; i < k; ++i) {
        if (mask & (1u << i)) y(i) = x(i) - shift;
      }
      if (y.minCoeff() < -1e-14 || y.sum() > delta + 1e-12) continue;
      const double dist = (x - y).squaredNorm();
      if (dist < best_dist) {
        best_dist = dist;
        best = y;
      }
    }
  }
  return best;
}

/// Golden-section search on a unimodal function.
inline double golden_section(const std::function<double(double)>& f, double lo, double hi, double tol = 1e-12) {
  const double r = (std::sqrt(5.0) - 1) / 2;
  double a = lo, b = hi;
  double c = b - r * (b - a), d = a + r * (b - a);
  while (b - a > tol) {
    if (f(c) < f(d)) {
      b = d;
    } else {
      a = c;
    }
    c = b - r * (b - a);
    d = a + r * (b - a);
  }
  return (a + b) / 2;
}

/// Central difference of a scalar function of a Point along every coordinate.
inline Point fd_gradient(const ScalarFn& f, const Point& x, double h = 1e-6) {
  Point g(x.rows(), x.cols());
  for (Index i = 0; i < x.size(); ++i) {
    Point xp = x, xm = x;
    xp.data()[i] += h;
    xm.data()[i] -= h;
    g.data()[i] = (f(xp) - f(xm)) / (2 * h);
  }
  return g;
}

/// Vector problem on the Euclidean ball assembled from plain lambdas.
inline BilevelProblem ball_problem(ScalarFn f, PointFn df, ScalarFn g, PointFn dg, Index n, double radius = 1) {
  BilevelProblem p;
  p.id = "test-ball";
  p.eval_f = std::move(f);
  p.grad_f = std::move(df);
  p.eval_g = std::move(g);
  p.grad_g = std::move(dg);
  p.lmo = [radius](const Point& d) { return ball_lmo(d, radius); };
  p.proj = [radius](const Point& x) { return ball_projection(x, radius); };
  p.contains = [radius](const Point& x, double tol) { return x.norm() <= radius + tol; };
  p.sample = [n, radius](std::mt19937_64& rng) {
    Point x = gaussian(n, 1, rng);
    return Point(x * (radius * uniform(rng) / x.norm()));
  };
  p.x0 = Point::Zero(n, 1);
  p.diameter_D = 2 * radius;
  return p;
}

}  // namespace ircg::testing
