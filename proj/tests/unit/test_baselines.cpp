#include <gtest/gtest.h>

#include "helpers.hpp"
#include "ircg/baselines.hpp"

namespace {

using namespace ircg;

Point scalar(double v) { return Point::Constant(1, 1, v); }

BilevelProblem zero_f_interval() {
  return make_interval_problem([](double) { return 0.0; }, [](double) { return 0.0; },
                               [](double x) { return x * x; }, [](double x) { return 2 * x; }, 1, 2);
}

BilevelProblem linear_f_interval() {
  return make_interval_problem([](double x) { return x; }, [](double) { return 1.0; },
                               [](double x) { return x * x; }, [](double x) { return 2 * x; }, 1, 2);
}

SolverState at(double x, Index t = 0) {
  SolverState s;
  s.t = t;
  s.x = scalar(x);
  s.z = s.x;
  return s;
}

BaselineParams fixed_irpg(double alpha) {
  BaselineParams p;
  p.kind = BaselineKind::IrPg;
  p.irpg_mode = IrpgStepMode::Fixed;
  p.fixed_alpha = alpha;
  return p;
}

TEST(IrpgStep, Examples) {
  const auto problem = zero_f_interval();
  EXPECT_DOUBLE_EQ(irpg_step(at(0.5), problem, fixed_irpg(0.25)).x(0), 0.25);
  EXPECT_DOUBLE_EQ(irpg_step(at(0.5), problem, fixed_irpg(2)).x(0), -1);
  EXPECT_DOUBLE_EQ(irpg_step(at(0), problem, fixed_irpg(0.25)).x(0), 0);
}

TEST(IrpgStep, PowerAndArmijoModes) {
  const auto problem = zero_f_interval();
  BaselineParams p;
  p.irpg_mode = IrpgStepMode::Power;
  p.alpha_tilde = 0.5;
  p.eta = 0.5;
  const auto s = irpg_step(at(0.5, 3), problem, p);
  EXPECT_DOUBLE_EQ(s.last_alpha, 0.25);
  EXPECT_DOUBLE_EQ(s.x(0), 0.25);
  p.irpg_mode = IrpgStepMode::Armijo;
  // alpha = 0.5 lands on 0 with decrease 0.25 >= 0.5 * 0.5, so it is accepted.
  EXPECT_DOUBLE_EQ(irpg_step(at(0.5), problem, p).x(0), 0);
}

TEST(IrpgStep, MissingProjection) {
  auto problem = zero_f_interval();
  problem.proj = nullptr;
  try {
    irpg_step(at(0.5), problem, fixed_irpg(0.25));
    FAIL() << "expected MissingProjection";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::MissingProjection);
  }
}

TEST(CgbioStep, IntervalHandEvaluation) {
  BaselineParams p;
  p.kind = BaselineKind::CgBio;
  p.g_ref = 0.25;
  const auto s = cgbio_step(at(0.5), linear_f_interval(), p);
  // alpha = 1 at t = 0, so x1 is the sliced LMO output.
  EXPECT_DOUBLE_EQ(s.x(0), -1);
}

TEST(CgbioStep, CutBindsAgainstOuterDirection) {
  // f = -x pushes v to +1, so the cut decides the answer.
  const auto problem = make_interval_problem([](double x) { return -x; }, [](double) { return -1.0; },
                                             [](double x) { return x * x; }, [](double x) { return 2 * x; }, 1, 2);
  BaselineParams p;
  p.kind = BaselineKind::CgBio;
  // At the warm start the cut is 1.6 (v - 0.8) <= 0, satisfied by v = x itself.
  p.g_ref = 0.64;
  EXPECT_NEAR(cgbio_step(at(0.8), problem, p).x(0), 0.8, 1e-15);
  // g_ref = 0 tightens it to 1.6 v <= 0.64.
  p.g_ref = 0.0;
  EXPECT_NEAR(cgbio_step(at(0.8), problem, p).x(0), 0.4, 1e-15);
}

TEST(CgbioStep, NuclearMapsToSnbLo) {
  const auto obs = gen_synthetic_completion(8, 6, 2, 0.5, 0.1, 4);
  const auto problem = make_matrix_completion(obs, 3);
  BaselineParams p;
  p.kind = BaselineKind::CgBio;
  SolverState s;
  s.x = problem.x0;
  p.g_ref = problem.eval_g(s.x);
  const Point gf = problem.grad_f(s.x), gg = problem.grad_g(s.x);
  const double b = gg.cwiseProduct(s.x).sum() + *p.g_ref - problem.eval_g(s.x);
  const auto expect = snb_lo(OracleMatrixProblem<double>{gf, gg, b, 3.0});
  const auto next = cgbio_step(s, problem, p);
  EXPECT_LE((next.x - expect.v).norm(), 1e-10);
}

TEST(CgbioStep, CutExcludesEverything) {
  BaselineParams p;
  p.kind = BaselineKind::CgBio;
  p.g_ref = -5;
  try {
    cgbio_step(at(0.5), linear_f_interval(), p);
    FAIL() << "expected InfeasibleOracle";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InfeasibleOracle);
  }
}

TEST(BisgStep, Examples) {
  BaselineParams p;
  p.kind = BaselineKind::BiSg;
  p.bisg_c = 0.25;
  EXPECT_DOUBLE_EQ(bisg_step(at(0.5), zero_f_interval(), p).x(0), 0.25);
  // grad g = 0 at x = 0: only the f step moves, by c (t + 1)^-alpha.
  const auto s = bisg_step(at(0, 3), linear_f_interval(), p);
  EXPECT_NEAR(s.x(0), -0.25 * std::pow(4.0, -p.bisg_alpha), 1e-15);
}

TEST(BisgStep, OuterStepVanishes) {
  BaselineParams p;
  p.kind = BaselineKind::BiSg;
  p.bisg_alpha = 0.99;
  const auto problem = linear_f_interval();
  const auto early = bisg_step(at(0, 0), problem, p), late = bisg_step(at(0, 1000000), problem, p);
  EXPECT_LT(std::abs(late.x(0)), 1e-5);
  EXPECT_GT(std::abs(early.x(0)), 0.5);
}

TEST(BaselineParams, Validation) {
  BaselineParams p;
  p.kind = BaselineKind::BiSg;
  p.bisg_alpha = 0.4;
  EXPECT_THROW(p.validate(), Error);
  p.kind = BaselineKind::CgBio;
  p.eps_g = 0;
  EXPECT_THROW(p.validate(), Error);
  EXPECT_EQ(parse_irpg_mode("power"), IrpgStepMode::Power);
  EXPECT_THROW(parse_baseline_kind("mng"), Error);
}

class BaselineSmoke : public ::testing::TestWithParam<BaselineKind> {};

TEST_P(BaselineSmoke, LeastNormFeasibleAndInnerGapSmall) {
  std::mt19937_64 rng(12);
  const Eigen::MatrixXd a = ircg::testing::gaussian(4, 6, rng);
  const auto problem = make_least_norm(a, a * ircg::testing::gaussian(6, 1, rng));
  BaselineParams params;
  params.kind = GetParam();
  params.bisg_c = 1 / problem.L_g;
  RunControl control;
  control.max_iters = 100000;
  control.record_every = 1000;
  bool feasible = true;
  const auto trace = solve_baseline(problem, params, control, {[&](const SolverState& s, const TraceRow&) {
                                      feasible = feasible && problem.contains(s.x, 1e-8);
                                    }});
  EXPECT_TRUE(feasible);
  double best = std::numeric_limits<double>::infinity();
  for (const auto& row : trace.rows) best = std::min(best, row.g_x - *problem.metadata.g_opt);
  EXPECT_LT(best, 1e-3) << trace.header.solver;
  EXPECT_TRUE(std::isnan(trace.rows.back().f_z));
}

INSTANTIATE_TEST_SUITE_P(Kinds, BaselineSmoke,
                         ::testing::Values(BaselineKind::IrPg, BaselineKind::CgBio, BaselineKind::BiSg));

}  // namespace
