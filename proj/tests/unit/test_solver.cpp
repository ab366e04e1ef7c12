#include <gtest/gtest.h>

#include <cmath>

#include "helpers.hpp"
#include "ircg/solver.hpp"

namespace {

using namespace ircg;
using ircg::testing::gaussian;

Point scalar(double v) { return Point::Constant(1, 1, v); }

BilevelProblem hand_trace_problem() {
  return make_interval_problem([](double x) { return 0.5 * x * x + x; }, [](double x) { return x + 1; },
                               [](double x) { return x * x; }, [](double x) { return 2 * x; }, 1, 2, 0.5);
}

/// Random strongly convex quadratic g and convex quadratic f on the unit ball in R^n.
BilevelProblem random_ball_quadratics(Index n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const Eigen::MatrixXd a = gaussian(n, n, rng), b = gaussian(n / 2, n, rng);
  const Eigen::VectorXd ca = gaussian(n, 1, rng), cb = gaussian(n / 2, 1, rng);
  auto p = ircg::testing::ball_problem(
      [b, cb](const Point& x) { return 0.5 * (b * x - cb).squaredNorm(); },
      [b, cb](const Point& x) { return Point(b.transpose() * (b * x - cb)); },
      [a, ca](const Point& x) { return 0.5 * (a * x - ca).squaredNorm(); },
      [a, ca](const Point& x) { return Point(a.transpose() * (a * x - ca)); }, n);
  p.L_f = ircg::testing::dense_sigma_max(b) * ircg::testing::dense_sigma_max(b);
  p.L_g = ircg::testing::dense_sigma_max(a) * ircg::testing::dense_sigma_max(a);
  return p;
}

TEST(IrcgStep, HandTrace) {
  const auto problem = hand_trace_problem();
  SolverConfig config;
  config.schedule = {1, 0.5};
  const SolverState s1 = ircg_step(initial_state(problem), problem, config);
  EXPECT_EQ(s1.t, 1);
  EXPECT_DOUBLE_EQ(s1.x(0), -1);
  EXPECT_DOUBLE_EQ(s1.last_alpha, 1);
  EXPECT_DOUBLE_EQ(s1.z(0), s1.x(0));
}

TEST(IrcgStep, SRecursionValues) {
  const auto problem = hand_trace_problem();
  SolverConfig config;
  config.schedule = {1, 0.5};
  SolverState s = initial_state(problem);
  s = ircg_step(s, problem, config);
  EXPECT_NEAR(s.S, 2, 1e-15);
  s = ircg_step(s, problem, config);
  EXPECT_NEAR(s.S, 2 + 4 / std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(s.S, 4.82843, 1e-5);
}

TEST(IrcgStep, ZOneEqualsXOneForAnySchedule) {
  const auto problem = random_ball_quadratics(6, 3);
  for (double p : {0.1, 0.5, 0.9}) {
    SolverConfig config;
    config.schedule = {0.3, p};
    const SolverState s1 = ircg_step(initial_state(problem), problem, config);
    EXPECT_LE((s1.z - s1.x).norm(), 1e-15);
  }
}

TEST(ZClosedForm, TrivialCases) {
  const RegSchedule sched{1, 0.5};
  const std::vector<Point> one = {scalar(0.7)};
  EXPECT_DOUBLE_EQ(z_closed_form(one, sched, 1)(0), 0.7);
  const std::vector<Point> same(5, Point(Eigen::Vector2d(1, -2)));
  EXPECT_LE((z_closed_form(same, sched, 5) - same[0]).norm(), 1e-14);
  EXPECT_THROW(z_closed_form(one, sched, 2), Error);
}

TEST(ZClosedForm, TwoStepWeights) {
  const RegSchedule sched{1, 0.5};
  const std::vector<Point> h = {scalar(1), scalar(3)};
  const double s0 = 1, s1 = 1 / std::sqrt(2.0), s2 = 1 / std::sqrt(3.0);
  const double w1 = 2 * (s0 - s1), w2 = 6 * s2 + 6 * (s1 - s2);
  EXPECT_NEAR(z_closed_form(h, sched, 2)(0), (w1 * 1 + w2 * 3) / (w1 + w2), 1e-14);
}

class RecursionEquivalence : public ::testing::TestWithParam<StepKind> {};

TEST_P(RecursionEquivalence, RecursionMatchesClosedForm) {
  const auto problem = random_ball_quadratics(10, 17);
  SolverConfig config;
  config.schedule = {0.7, 0.4};
  config.step_rule.kind = GetParam();
  SolverState s = initial_state(problem);
  std::vector<Point> history;
  for (Index t = 1; t <= 300; ++t) {
    s = ircg_step(s, problem, config);
    history.push_back(s.x);
    const Point zc = z_closed_form(history, config.schedule, t);
    ASSERT_LE((s.z - zc).norm(), 1e-10 * std::max(1.0, zc.norm())) << "t=" << t;
    ASSERT_NEAR(s.S, s_closed_form(config.schedule, t), 1e-12 * s.S) << "t=" << t;
    ASSERT_GE(s.S, (t + 1.0) * t * sigma_at(config.schedule, t) * (1 - 1e-12));
    ASSERT_TRUE(problem.contains(s.z, kMembershipTol));
  }
}

INSTANTIATE_TEST_SUITE_P(Rules, RecursionEquivalence,
                         ::testing::Values(StepKind::OpenLoop, StepKind::ClosedLoop, StepKind::LineSearch));

TEST(Solve, ZeroIterationsRecordsInitialPoint) {
  SolverConfig config;
  config.max_iters = 0;
  const auto trace = solve(make_interval_quadratic(), config);
  ASSERT_EQ(trace.rows.size(), 1u);
  EXPECT_EQ(trace.rows[0].t, 0);
  EXPECT_TRUE(std::isnan(trace.rows[0].f_z));
  EXPECT_EQ(trace.header.solver, "ircg-open-loop");
}

TEST(Solve, IntervalCertificateC) {
  const auto problem = make_interval_quadratic();
  SolverConfig config;
  config.schedule = {1, 0.5};
  config.max_iters = 10000;
  config.record_every = 100;
  const auto trace = solve(problem, config);
  CertificateInputs in;
  in.F = *problem.metadata.f_opt - *problem.metadata.min_f_over_X;
  in.D = problem.diameter_D;
  in.L_f = problem.L_f;
  in.L_g = problem.L_g;
  in.varsigma = 1;
  in.p = 0.5;
  const auto cc = certificate_constants(in);
  for (const auto& row : trace.rows) {
    EXPECT_LE(row.g_x - *problem.metadata.g_opt, cc.C_bound * sigma_at(config.schedule, row.t)) << row.t;
  }
  EXPECT_EQ(trace.rows.back().t, 10000);
}

TEST(Solve, LeastNormOuterConverges) {
  Eigen::MatrixXd a(1, 2);
  a << 1, 1;
  const auto problem = make_least_norm(a, Eigen::VectorXd::Ones(1), 2.0);
  SolverConfig config;
  config.schedule = {1, 0.5};
  config.max_iters = 20000;
  config.record_every = 1000;
  const auto trace = solve(problem, config);
  const double early = std::abs(trace.rows[1].f_z - 0.25);
  const double late = std::abs(trace.rows.back().f_z - 0.25);
  EXPECT_LT(late, 0.05);
  EXPECT_LT(late, early);
}

TEST(Solve, DeterministicRows) {
  const auto problem = random_ball_quadratics(6, 8);
  SolverConfig config;
  config.max_iters = 200;
  config.step_rule.kind = StepKind::LineSearch;
  const auto a = solve(problem, config), b = solve(problem, config);
  ASSERT_EQ(a.rows.size(), b.rows.size());
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    EXPECT_EQ(a.rows[i].f_x, b.rows[i].f_x);
    if (i > 0) EXPECT_EQ(a.rows[i].g_z, b.rows[i].g_z);
  }
}

TEST(Solve, ObserverSeesEveryRecordedRow) {
  SolverConfig config;
  config.max_iters = 50;
  config.record_every = 10;
  int calls = 0;
  const auto trace = solve(make_interval_quadratic(), config, {[&](const SolverState&, const TraceRow&) { ++calls; }});
  EXPECT_EQ(calls, static_cast<int>(trace.rows.size()));
  EXPECT_EQ(trace.rows.size(), 6u);
}

TEST(Solve, ErrorCarriesPartialTrace) {
  auto problem = make_interval_quadratic();
  int calls = 0;
  problem.lmo = [&calls](const Point& d) {
    if (++calls > 3) return Point(Point::Constant(1, 1, std::numeric_limits<double>::quiet_NaN()));
    return ball_lmo(d, 1);
  };
  SolverConfig config;
  config.max_iters = 10;
  try {
    solve(problem, config);
    FAIL() << "expected RunAborted";
  } catch (const RunAborted& e) {
    EXPECT_EQ(e.code(), ErrorCode::NonFiniteValue);
    EXPECT_EQ(e.partial().rows.size(), 4u);
    EXPECT_EQ(e.partial().header.stop_reason, "error");
  }
}

TEST(CertificateConstants, CAndV) {
  CertificateInputs in;
  in.F = 1;
  in.D = 2;
  in.L_f = in.L_g = 1;
  in.varsigma = 0.05;
  in.p = 0.5;
  const auto cc = certificate_constants(in);
  EXPECT_NEAR(cc.C_bound, 170, 1e-10);
  EXPECT_NEAR(cc.V_bound, 1, 1e-15);
  EXPECT_FALSE(cc.W_bound.has_value());
}

TEST(CertificateConstants, WWithoutRootTerm) {
  CertificateInputs in;
  in.D = 2;
  in.varsigma = 0.5;
  in.kappa = 1;
  in.G_f = 0;
  in.g0_gap = 1000;
  EXPECT_DOUBLE_EQ(*certificate_constants(in, true).W_bound, 1000);
  in.g0_gap = 0;
  const double a = 4 * (in.L_f * in.varsigma + in.L_g) * in.D * in.D;
  EXPECT_NEAR(*certificate_constants(in, true).W_bound, a, 1e-12);
}

TEST(CertificateConstants, WFixedPoint) {
  // p = 1/2, varsigma = kappa = 1 gives c = 4 G_f and a = 4 (L_f + L_g) D^2 + G_f^2.
  CertificateInputs in;
  in.p = 0.5;
  in.varsigma = 1;
  in.kappa = 1;
  in.G_f = 0.25;
  in.L_f = in.L_g = 0.5;
  in.D = std::sqrt((3 - 1.0 / 16) / 4);
  in.g0_gap = 0;
  const double w = *certificate_constants(in, true).W_bound;
  EXPECT_NEAR(w, std::pow((1 + std::sqrt(13.0)) / 2, 2), 1e-12);
  EXPECT_NEAR(w, 5.30278, 1e-5);
  EXPECT_NEAR(w, 3 + std::sqrt(w), 1e-12);
}

TEST(CertificateConstants, MissingMetadata) {
  CertificateInputs in;
  try {
    certificate_constants(in, true);
    FAIL() << "expected MissingMetadata";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::MissingMetadata);
  }
  in.p = 1;
  EXPECT_THROW(certificate_constants(in), Error);
}

TEST(CertificateBounds, Examples) {
  CertificateInputs in;
  in.D = 2;
  in.varsigma = 1;
  in.p = 0.5;
  in.kappa = 1;
  in.G_f = 1;
  in.g0_gap = 0.5;
  const auto cc = certificate_constants(in, true);
  EXPECT_NEAR(certificate_bounds_at(3, cc).outer, 8, 1e-14);
  EXPECT_DOUBLE_EQ(*certificate_bounds_at(0, cc).inner_accelerated, *cc.W_bound);
  auto prev = certificate_bounds_at(0, cc);
  for (Index t = 1; t < 1000; ++t) {
    const auto cur = certificate_bounds_at(t, cc);
    EXPECT_LE(cur.inner, prev.inner);
    EXPECT_LE(cur.outer, prev.outer);
    EXPECT_LE(*cur.inner_accelerated, *prev.inner_accelerated);
    EXPECT_LE(*cur.outer_accelerated, *prev.outer_accelerated);
    prev = cur;
  }
}

TEST(EstimateGOpt, IntervalQuadratic) {
  const double g = estimate_g_opt(make_interval_quadratic(), 1e-5, 1e-12);
  EXPECT_GE(g, 0);
  EXPECT_LE(g, 1e-12);
}

TEST(EstimateGOpt, ConsistentLeastNorm) {
  Eigen::MatrixXd a(2, 2);
  a << 2, 1, 0.5, 1;
  const auto problem = make_least_norm(a, Eigen::Vector2d(0.3, -0.2));
  GOptOptions opts;
  opts.step_rule.kind = StepKind::ClosedLoop;
  const double g = estimate_g_opt(problem, 1e-5, 1e-12, opts);
  EXPECT_GE(g, 0);
  EXPECT_LE(g, 1e-12);
}

TEST(EstimateGOpt, CapAndArguments) {
  GOptOptions opts;
  opts.max_iters = 3;
  Eigen::MatrixXd a(2, 2);
  a << 2, 1, 0.5, 1;
  try {
    estimate_g_opt(make_least_norm(a, Eigen::Vector2d(0.3, -0.2)), 1e-5, 1e-12, opts);
    FAIL() << "expected NonConvergence";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NonConvergence);
  }
  EXPECT_THROW(estimate_g_opt(make_interval_quadratic(), 1e-12, 1e-5), Error);
}

TEST(EstimateGOptProjected, AgreesWithAnalyticAndCertifies) {
  std::mt19937_64 rng(19);
  const Eigen::MatrixXd a = gaussian(6, 4, rng);
  const auto problem = make_least_norm(a, gaussian(6, 1, rng));
  const double g = estimate_g_opt_projected(problem, 1e-12);
  EXPECT_GE(g, *problem.metadata.g_opt - 1e-12);
  EXPECT_LE(g, *problem.metadata.g_opt + 1e-12);
}

TEST(EstimateGOptProjected, CompletionMatchesSlowCg) {
  const auto problem = make_matrix_completion(gen_synthetic_completion(10, 8, 2, 0.4, 0.1, 1), 2);
  const double fast = estimate_g_opt_projected(problem, 1e-10);
  GOptOptions opts;
  opts.max_iters = 2000000;
  const double slow = estimate_g_opt(problem, 1e-5, 1e-7, opts);
  EXPECT_LE(fast, slow + 1e-10);
  EXPECT_GE(fast, slow - 1e-7);
}

TEST(EstimateGOptProjected, NeedsProjection) {
  auto problem = make_interval_quadratic();
  problem.proj = nullptr;
  EXPECT_THROW(estimate_g_opt_projected(problem, 1e-8), Error);
}

}  // namespace
