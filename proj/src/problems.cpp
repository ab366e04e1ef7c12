#include "ircg/problems.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <memory>
#include <random>
#include <sstream>
#include <unordered_set>

namespace ircg {

void Observations::validate() const {
  require(n_rows >= 1 && n_cols >= 1, ErrorCode::InvalidArgument, "observations need positive dimensions");
  std::unordered_set<Index> seen;
  seen.reserve(entries.size());
  for (const Entry& e : entries) {
    require(e.i >= 0 && e.i < n_rows && e.j >= 0 && e.j < n_cols, ErrorCode::InvalidArgument,
            "observation index out of range");
    require(std::isfinite(e.value), ErrorCode::NonFiniteValue, "observation value is not finite");
    if (!seen.insert(e.i * n_cols + e.j).second) {
      throw Error(ErrorCode::DuplicateEntry, "duplicate observation (" + std::to_string(e.i + 1) + ", " +
                                                 std::to_string(e.j + 1) + ")");
    }
  }
}

Point ball_lmo(const Point& d, double radius) {
  const double norm = d.norm();
  if (norm == 0) return Point::Zero(d.rows(), d.cols());
  return (-radius / norm) * d;
}

Point ball_projection(const Point& x, double radius) {
  const double norm = x.norm();
  if (norm <= radius) return x;
  return (radius / norm) * x;
}

Point ball_sliced_lmo(const Point& c, const Point& a, double b, double radius) {
  require_same_shape(a, c, "ball_sliced_lmo");
  const double a2 = a.squaredNorm();
  const double tol = 1e-12 * (1 + std::abs(b));
  Point v = ball_lmo(c, radius);
  if (frobenius_inner(a, v) <= b + tol) return v;
  if (a2 == 0) throw Error(ErrorCode::InfeasibleOracle, "cut 0 <= b with b < 0");
  const double a_norm = std::sqrt(a2);
  if (b < -radius * a_norm - 1e-9 * (1 + std::abs(b))) {
    throw Error(ErrorCode::InfeasibleOracle, "cut misses the ball");
  }
  // The cut is active: minimize over the disk {<a, v> = b} inside the ball.
  const Point center = (b / a2) * a;
  const double rho = std::sqrt(std::max(0.0, radius * radius - center.squaredNorm()));
  const Point c_perp = c - (frobenius_inner(c, a) / a2) * a;
  const double c_perp_norm = c_perp.norm();
  if (c_perp_norm <= 1e-15 * std::max(1.0, c.norm())) return center;
  return center - (rho / c_perp_norm) * c_perp;
}

namespace {

Point uniform_in_ball(std::mt19937_64& rng, Index rows, Index cols, double radius) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Point d(rows, cols);
  for (Index i = 0; i < d.size(); ++i) d.data()[i] = normal(rng);
  const double r = radius * std::pow(unit(rng), 1.0 / static_cast<double>(d.size()));
  return (r / d.norm()) * d;
}

BilevelProblem ball_problem(Index n, double radius) {
  BilevelProblem pb;
  pb.lmo = [radius](const Point& d) { return ball_lmo(d, radius); };
  pb.proj = [radius](const Point& x) { return ball_projection(x, radius); };
  pb.sliced_lmo = [radius](const Point& c, const Point& a, double b) { return ball_sliced_lmo(c, a, b, radius); };
  pb.contains = [radius](const Point& x, double tol) { return x.norm() <= radius + tol; };
  pb.sample = [n, radius](std::mt19937_64& rng) { return uniform_in_ball(rng, n, 1, radius); };
  pb.diameter_D = 2 * radius;
  pb.x0 = pb.lmo(Point::Zero(n, 1));
  return pb;
}

}  // namespace

BilevelProblem make_least_norm(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, std::optional<double> radius) {
  require(a.rows() == b.size(), ErrorCode::DimensionMismatch, "make_least_norm: A rows must match b");
  require(a.allFinite() && b.allFinite(), ErrorCode::NonFiniteValue, "make_least_norm data");
  const Eigen::VectorXd x_star = a.completeOrthogonalDecomposition().solve(b);
  const double x_norm = x_star.norm();
  const double r = radius.value_or(x_norm > 0 ? 2 * x_norm : 1.0);
  if (!(r > x_norm)) {
    throw Error(ErrorCode::RadiusTooSmall,
                "radius " + std::to_string(r) + " must exceed ||A^+ b|| = " + std::to_string(x_norm));
  }

  BilevelProblem pb = ball_problem(a.cols(), r);
  pb.id = "least_norm";
  pb.eval_f = [](const Point& x) { return 0.5 * x.squaredNorm(); };
  pb.grad_f = [](const Point& x) { return x; };
  pb.eval_g = [a, b](const Point& x) { return 0.5 * (a * x.col(0) - b).squaredNorm(); };
  pb.grad_g = [a, b](const Point& x) -> Point { return a.transpose() * (a * x.col(0) - b); };
  pb.L_f = 1;
  const double sigma_a = spectral_norm(a);
  pb.L_g = std::max(sigma_a * sigma_a, 1e-300);
  pb.metadata.set("f_opt", 0.5 * x_star.squaredNorm(), "analytic: ||A^+ b||^2 / 2");
  pb.metadata.set("g_opt", 0.5 * (a * x_star - b).squaredNorm(), "analytic: ||(I - AA^+) b||^2 / 2");
  pb.metadata.set("min_f_over_X", 0.0, "analytic: f >= 0 = f(0)");
  pb.metadata.set("alpha_f", 1.0, "analytic");
  pb.metadata.set("alpha_X", 1.0 / r, "analytic: ball of radius r");
  pb.metadata.x_opt = Point(x_star);
  return pb;
}

namespace {

struct BallQuadraticGeometry {
  Eigen::VectorXd x_p;     // A^+ b, orthogonal to the null space
  Eigen::MatrixXd null;    // orthonormal null-space basis
  Eigen::MatrixXd row;     // orthonormal row-space basis
  double rho = 0;          // radius left for the null-space component
};

BallQuadraticGeometry geometry(const Eigen::MatrixXd& aq, const Eigen::VectorXd& bq) {
  const Index n = aq.rows();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig((aq + aq.transpose()) / 2);
  const double lmax = std::max(eig.eigenvalues().cwiseAbs().maxCoeff(), 1.0);
  const double zero = 1e-10 * lmax;
  BallQuadraticGeometry geo;
  std::vector<Index> null_idx, row_idx;
  for (Index k = 0; k < n; ++k) (eig.eigenvalues()(k) <= zero ? null_idx : row_idx).push_back(k);
  geo.null.resize(n, static_cast<Index>(null_idx.size()));
  geo.row.resize(n, static_cast<Index>(row_idx.size()));
  for (std::size_t k = 0; k < null_idx.size(); ++k) geo.null.col(k) = eig.eigenvectors().col(null_idx[k]);
  Eigen::VectorXd coeff = Eigen::VectorXd::Zero(n);
  for (std::size_t k = 0; k < row_idx.size(); ++k) {
    const Index idx = row_idx[k];
    geo.row.col(k) = eig.eigenvectors().col(idx);
    coeff += eig.eigenvectors().col(idx) * (eig.eigenvectors().col(idx).dot(bq) / eig.eigenvalues()(idx));
  }
  geo.x_p = coeff;
  geo.rho = std::sqrt(std::max(0.0, 1 - geo.x_p.squaredNorm()));
  return geo;
}

/// Projection onto X_opt = (x_p + null space) within the unit ball.
Eigen::VectorXd project_solution_set(const BallQuadraticGeometry& geo, const Eigen::VectorXd& y) {
  Eigen::VectorXd w = geo.null.transpose() * y;
  const double wn = w.norm();
  if (wn > geo.rho) w *= geo.rho / wn;
  return geo.x_p + geo.null * w;
}

}  // namespace

BilevelProblem make_ball_quadratic(const Eigen::MatrixXd& aq, const Eigen::VectorXd& bq,
                                   const Eigen::VectorXd& f_center, std::optional<double> kappa) {
  const Index n = aq.rows();
  require(aq.cols() == n && bq.size() == n && f_center.size() == n, ErrorCode::DimensionMismatch,
          "make_ball_quadratic shapes");
  require(aq.allFinite() && bq.allFinite() && f_center.allFinite(), ErrorCode::NonFiniteValue,
          "make_ball_quadratic data");
  const double scale = std::max(aq.cwiseAbs().maxCoeff(), 1.0);
  if ((aq - aq.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
    throw Error(ErrorCode::PreconditionViolated, "Aq is not symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(aq);
  const double lmin = eig.eigenvalues()(0);
  if (lmin < -1e-10 * scale) throw Error(ErrorCode::PreconditionViolated, "Aq is not positive semidefinite");
  const BallQuadraticGeometry geo = geometry(aq, bq);
  if ((aq * geo.x_p - bq).norm() > 1e-9 * std::max(1.0, bq.norm())) {
    throw Error(ErrorCode::PreconditionViolated, "bq is not in the column space of Aq");
  }
  const double xp_norm = geo.x_p.norm();
  const bool singular = geo.null.cols() > 0;
  if (!singular && xp_norm > 1 + 1e-12) {
    throw Error(ErrorCode::PreconditionViolated, "lambda_min(Aq) > 0 case needs ||Aq^+ bq|| <= 1");
  }
  if (singular && !(xp_norm < 1)) {
    throw Error(ErrorCode::PreconditionViolated, "lambda_min(Aq) = 0 case needs ||Aq^+ bq|| < 1");
  }

  BilevelProblem pb = ball_problem(n, 1.0);
  pb.id = "ball_quadratic";
  pb.eval_f = [f_center](const Point& x) { return 0.5 * (x.col(0) - f_center).squaredNorm(); };
  pb.grad_f = [f_center](const Point& x) -> Point { return x.col(0) - f_center; };
  pb.eval_g = [aq, bq](const Point& x) {
    const Eigen::VectorXd v = x.col(0);
    return v.dot(aq * v) - 2 * bq.dot(v);
  };
  pb.grad_g = [aq, bq](const Point& x) -> Point { return 2 * (aq * x.col(0)) - 2 * bq; };
  pb.L_f = 1;
  pb.L_g = std::max(2 * eig.eigenvalues()(n - 1), 1e-300);

  const Eigen::VectorXd x_opt = project_solution_set(geo, f_center);
  const Eigen::VectorXd c_null = geo.null.transpose() * f_center;
  const Eigen::VectorXd c_row_resid = geo.x_p - geo.row * (geo.row.transpose() * f_center);
  pb.metadata.set("f_opt", 0.5 * (x_opt - f_center).squaredNorm(), "analytic: projection onto X_opt");
  pb.metadata.set("g_opt", -bq.dot(geo.x_p), "analytic: -bq' Aq^+ bq");
  const double over = std::max(0.0, f_center.norm() - 1);
  pb.metadata.set("min_f_over_X", 0.5 * over * over, "analytic: distance from f_center to the ball");
  pb.metadata.set("G_f", std::sqrt(c_row_resid.squaredNorm() + std::pow(c_null.norm() + geo.rho, 2)),
                  "analytic: farthest point of X_opt from f_center");
  pb.metadata.set("alpha_f", 1.0, "analytic");
  pb.metadata.set("alpha_X", 1.0, "analytic: unit ball");
  if (kappa) pb.metadata.set("kappa", *kappa, "supplied");
  pb.metadata.x_opt = Point(x_opt);
  return pb;
}

double estimate_ball_quadratic_kappa(const Eigen::MatrixXd& aq, const Eigen::VectorXd& bq, int samples,
                                     std::uint64_t seed) {
  require(samples >= 1, ErrorCode::InvalidArgument, "estimate_ball_quadratic_kappa needs samples >= 1");
  const BallQuadraticGeometry geo = geometry(aq, bq);
  const double g_opt = -bq.dot(geo.x_p);
  std::mt19937_64 rng(seed);
  double best = std::numeric_limits<double>::infinity();
  for (int k = 0; k < samples; ++k) {
    const Eigen::VectorXd x = uniform_in_ball(rng, aq.rows(), 1, 1.0).col(0);
    const double dist2 = (x - project_solution_set(geo, x)).squaredNorm();
    if (dist2 < 1e-12) continue;
    best = std::min(best, (x.dot(aq * x) - 2 * bq.dot(x) - g_opt) / dist2);
  }
  require(std::isfinite(best), ErrorCode::InsufficientData, "every sample was on the solution set");
  return best;
}

BilevelProblem make_interval_problem(std::function<double(double)> f, std::function<double(double)> df,
                                     std::function<double(double)> g, std::function<double(double)> dg,
                                     double L_f, double L_g, double x0, double radius, const std::string& id) {
  require(radius > 0 && std::abs(x0) <= radius, ErrorCode::InvalidArgument, "interval needs |x0| <= radius");
  BilevelProblem pb = ball_problem(1, radius);
  pb.id = id;
  pb.eval_f = [f](const Point& x) { return f(x(0, 0)); };
  pb.grad_f = [df](const Point& x) { return Point::Constant(1, 1, df(x(0, 0))); };
  pb.eval_g = [g](const Point& x) { return g(x(0, 0)); };
  pb.grad_g = [dg](const Point& x) { return Point::Constant(1, 1, dg(x(0, 0))); };
  pb.L_f = L_f;
  pb.L_g = L_g;
  pb.x0 = Point::Constant(1, 1, x0);
  return pb;
}

BilevelProblem make_interval_quadratic() {
  BilevelProblem pb = make_interval_problem([](double x) { return 0.5 * (x - 1) * (x - 1); },
                                            [](double x) { return x - 1; }, [](double x) { return x * x; },
                                            [](double x) { return 2 * x; }, 1.0, 2.0, 0.0, 1.0, "interval_quadratic");
  pb.metadata.set("f_opt", 0.5, "analytic: X_opt = {0}");
  pb.metadata.set("g_opt", 0.0, "analytic");
  pb.metadata.set("min_f_over_X", 0.0, "analytic: f(1) = 0");
  pb.metadata.set("kappa", 1.0, "analytic: g = x^2");
  pb.metadata.set("G_f", 1.0, "analytic: |f'(0)|");
  pb.metadata.x_opt = Point::Zero(1, 1);
  return pb;
}

BilevelProblem make_matrix_completion(const Observations& obs, double delta, const CompletionOptions& opts) {
  require(delta > 0, ErrorCode::InvalidArgument, "make_matrix_completion needs delta > 0");
  obs.validate();
  const Index n = obs.n_rows, p = obs.n_cols;
  // Entries are copied into flat arrays; gradients scatter into a fresh matrix.
  auto rows = std::make_shared<std::vector<Index>>();
  auto cols = std::make_shared<std::vector<Index>>();
  auto vals = std::make_shared<std::vector<double>>();
  for (const Entry& e : obs.entries) {
    rows->push_back(e.i);
    cols->push_back(e.j);
    vals->push_back(e.value);
  }

  BilevelProblem pb;
  pb.id = "matrix_completion";
  pb.eval_f = [](const Point& x) { return 0.5 * (x.rowwise() - x.colwise().mean()).squaredNorm(); };
  pb.grad_f = [](const Point& x) -> Point { return x.rowwise() - x.colwise().mean(); };
  pb.eval_g = [rows, cols, vals](const Point& x) {
    double acc = 0;
    for (std::size_t k = 0; k < vals->size(); ++k) {
      const double r = x((*rows)[k], (*cols)[k]) - (*vals)[k];
      acc += r * r;
    }
    return 0.5 * acc;
  };
  pb.grad_g = [rows, cols, vals](const Point& x) {
    Point grad = Point::Zero(x.rows(), x.cols());
    for (std::size_t k = 0; k < vals->size(); ++k) {
      grad((*rows)[k], (*cols)[k]) = x((*rows)[k], (*cols)[k]) - (*vals)[k];
    }
    return grad;
  };
  const SpectralOptions spectral = opts.spectral;
  const SnbOptions snb = opts.snb;
  pb.lmo = [delta, spectral](const Point& c) { return lmo_nuclear(c, delta, spectral); };
  pb.proj = [delta](const Point& x) { return project_nuclear(x, delta); };
  pb.sliced_lmo = [delta, snb](const Point& c, const Point& a, double b) {
    return snb_lo(OracleMatrixProblem<double>{c, a, b, delta}, snb).v;
  };
  pb.contains = [delta](const Point& x, double tol) { return nuclear_norm(x) <= delta + tol; };
  pb.sample = [delta, n, p](std::mt19937_64& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    Point g(n, p);
    for (Index i = 0; i < g.size(); ++i) g.data()[i] = normal(rng);
    return Point((delta * unit(rng) / nuclear_norm(g)) * g);
  };
  pb.L_f = 1;
  pb.L_g = 1;
  pb.diameter_D = 2 * delta;
  pb.x0 = Point::Zero(n, p);
  for (Index k = 0; k < std::min(n, p); ++k) pb.x0(k, k) = 0.01 * delta / static_cast<double>(p);
  pb.metadata.set("min_f_over_X", 0.0, "analytic: f >= 0 = f(0)");
  return pb;
}

Observations load_ratings(const std::string& path, Index n_rows, Index n_cols) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
  Observations obs;
  obs.n_rows = n_rows;
  obs.n_cols = n_cols;
  std::unordered_set<Index> seen;
  std::string line;
  Index line_no = 0;
  auto fail = [&](const std::string& why) {
    throw Error(ErrorCode::ParseError, path + ":" + std::to_string(line_no) + ": " + why);
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (;;) {
      const std::size_t pos = line.find("::", start);
      fields.push_back(line.substr(start, pos == std::string::npos ? std::string::npos : pos - start));
      if (pos == std::string::npos) break;
      start = pos + 2;
    }
    if (fields.size() != 4) fail("expected 4 '::'-separated fields, got " + std::to_string(fields.size()));
    for (const auto& f : fields) {
      if (f.empty()) fail("empty field");
    }
    Index user = 0, movie = 0;
    auto parse_index = [&](const std::string& s, Index& out) {
      const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
      if (res.ec != std::errc() || res.ptr != s.data() + s.size()) fail("bad integer '" + s + "'");
    };
    parse_index(fields[0], user);
    parse_index(fields[1], movie);
    double rating = 0;
    try {
      std::size_t used = 0;
      rating = std::stod(fields[2], &used);
      if (used != fields[2].size()) fail("bad rating '" + fields[2] + "'");
    } catch (const std::logic_error&) {
      fail("bad rating '" + fields[2] + "'");
    }
    if (!std::isfinite(rating)) fail("rating is not finite");
    if (user < 1 || user > n_rows || movie < 1 || movie > n_cols) fail("index out of range");
    const Index i = user - 1, j = movie - 1;
    if (!seen.insert(i * n_cols + j).second) {
      throw Error(ErrorCode::DuplicateEntry, path + ":" + std::to_string(line_no) + ": duplicate (" +
                                                 fields[0] + ", " + fields[1] + ")");
    }
    obs.entries.push_back({i, j, rating});
  }
  return obs;
}

Observations gen_synthetic_completion(Index n, Index p, Index rank, double density, double noise,
                                      std::uint64_t seed) {
  require(n >= 1 && p >= 1 && rank >= 1 && rank <= std::min(n, p), ErrorCode::InvalidArgument,
          "gen_synthetic_completion needs 1 <= rank <= min(n, p)");
  require(density > 0 && density <= 1, ErrorCode::InvalidArgument, "density must be in (0, 1]");
  require(noise >= 0, ErrorCode::InvalidArgument, "noise must be >= 0");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto gaussian = [&](Index r, Index c) {
    Eigen::MatrixXd m(r, c);
    for (Index j = 0; j < c; ++j)
      for (Index i = 0; i < r; ++i) m(i, j) = normal(rng);
    return m;
  };
  const Eigen::MatrixXd left = gaussian(n, rank);
  const Eigen::MatrixXd right = gaussian(rank, p);
  Eigen::MatrixXd m = left * right / std::sqrt(static_cast<double>(rank));
  if (noise > 0) m += noise * gaussian(n, p);
  Observations obs;
  obs.n_rows = n;
  obs.n_cols = p;
  for (Index j = 0; j < p; ++j)
    for (Index i = 0; i < n; ++i)
      if (density >= 1 || unit(rng) < density) obs.entries.push_back({i, j, m(i, j)});
  return obs;
}

}  // namespace ircg
