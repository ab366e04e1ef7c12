#include <gtest/gtest.h>

#include <cmath>

#include "helpers.hpp"
#include "ircg/nuclear.hpp"

namespace {

using namespace ircg;
using ircg::testing::dense_nuclear_norm;
using ircg::testing::dense_sigma_max;
using ircg::testing::gaussian;
using ircg::testing::uniform;

Eigen::MatrixXd diag2(double a, double b) { return Eigen::Vector2d(a, b).asDiagonal(); }

double inner(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) { return a.cwiseProduct(b).sum(); }

/// max over lambda >= 0 of -b lambda - delta sigma_max(C + lambda A), by golden
/// section with dense SVDs on [0, hi].
double dual_max(const OracleMatrixProblem<double>& p, double hi) {
  auto obj = [&](double l) { return p.delta * dense_sigma_max(Eigen::MatrixXd(p.c + l * p.a)) + p.b * l; };
  const double l = ircg::testing::golden_section(obj, 0, hi, 1e-11);
  return -std::min({obj(l), obj(0.0)});
}

/// Matrix with a planted repeated leading singular value.
Eigen::MatrixXd repeated_top(Index n, Index p, Index mult, std::mt19937_64& rng) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(gaussian(n, p, rng), Eigen::ComputeThinU | Eigen::ComputeThinV);
  Eigen::VectorXd s = svd.singularValues();
  for (Index i = 0; i < mult; ++i) s(i) = s(0);
  return svd.matrixU() * s.asDiagonal() * svd.matrixV().transpose();
}

TEST(LmoNuclear, Examples) {
  const Eigen::MatrixXd v1 = lmo_nuclear(diag2(2, 1), 1.0);
  EXPECT_LE((v1 - diag2(-1, 0)).norm(), 1e-12);
  EXPECT_NEAR(inner(diag2(2, 1), v1), -2, 1e-12);

  Eigen::MatrixXd c(2, 2);
  c << 0, 3, 0, 0;
  Eigen::MatrixXd expect(2, 2);
  expect << 0, -2, 0, 0;
  const Eigen::MatrixXd v2 = lmo_nuclear(c, 2.0);
  EXPECT_LE((v2 - expect).norm(), 1e-12);
  EXPECT_NEAR(inner(c, v2), -6, 1e-12);

  EXPECT_EQ(lmo_nuclear(Eigen::MatrixXd::Zero(3, 2), 4.0).norm(), 0);
}

TEST(LmoNuclear, OptimalAndOnSphere) {
  std::mt19937_64 rng(31);
  for (auto [n, p] : {std::pair<Index, Index>{6, 5}, {40, 30}}) {
    for (int k = 0; k < 30; ++k) {
      const Eigen::MatrixXd c = gaussian(n, p, rng);
      const double delta = uniform(rng, 0.5, 5);
      const Eigen::MatrixXd v = lmo_nuclear(c, delta);
      const double ref = -delta * dense_sigma_max(c);
      EXPECT_NEAR(inner(c, v), ref, 1e-8 * std::abs(ref));
      EXPECT_NEAR(dense_nuclear_norm(v), delta, 1e-8 * delta);
    }
  }
}

TEST(NbBlo, Examples) {
  EXPECT_LE((nb_blo(Eigen::MatrixXd::Identity(2, 2), diag2(1, 2), 1.0) - diag2(0, -1)).norm(), 1e-12);
  std::mt19937_64 rng(1);
  EXPECT_LE((nb_blo(diag2(4, 1), gaussian(2, 2, rng), 1.0) - diag2(-1, 0)).norm(), 1e-12);
  EXPECT_LE((nb_blo(diag2(1, -1), diag2(1, 0), 1.0) - diag2(-1, 0)).norm(), 1e-12);
}

TEST(NbBlo, MatchesRankOneGridOnRepeatedFace) {
  std::mt19937_64 rng(41);
  for (int k = 0; k < 20; ++k) {
    const Eigen::MatrixXd p = repeated_top(5, 4, 2, rng);
    const Eigen::MatrixXd q = gaussian(5, 4, rng);
    const double delta = 2;
    const Eigen::MatrixXd v = nb_blo(p, q, delta);
    const double sigma = dense_sigma_max(p);
    EXPECT_NEAR(inner(p, v), -delta * sigma, 1e-9 * delta * sigma);

    // Brute force over unit vectors in the top right singular plane.
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(p, Eigen::ComputeThinV);
    const Eigen::MatrixXd plane = svd.matrixV().leftCols(2);
    double best = std::numeric_limits<double>::infinity();
    for (int j = 0; j < 20000; ++j) {
      const double th = M_PI * j / 20000;
      const Eigen::VectorXd w = plane * Eigen::Vector2d(std::cos(th), std::sin(th));
      best = std::min(best, inner(q, Eigen::MatrixXd(-(delta / sigma) * (p * w) * w.transpose())));
    }
    EXPECT_LE(inner(q, v), best + 1e-6);
    EXPECT_GE(inner(q, v), best - 1e-6);
  }
}

TEST(NbBlo, ZeroP) {
  try {
    nb_blo(Eigen::MatrixXd::Zero(2, 2), diag2(1, 1), 1.0);
    FAIL() << "expected ZeroMatrix";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ZeroMatrix);
  }
}

TEST(SnbLo, ZeroConstraintExample) {
  const auto s = snb_lo(OracleMatrixProblem<double>{diag2(2, 1), Eigen::MatrixXd::Zero(2, 2), 0, 1});
  EXPECT_EQ(s.lambda_star, 0);
  EXPECT_LE((s.v - diag2(-1, 0)).norm(), 1e-12);
  EXPECT_NEAR(s.primal_value, -2, 1e-12);
  EXPECT_NEAR(s.dual_value, -2, 1e-12);
  EXPECT_TRUE(s.certified);
  EXPECT_EQ(s.branch, SnbBranch::ZeroConstraint);
}

TEST(SnbLo, BoundaryExample) {
  const auto s = snb_lo(OracleMatrixProblem<double>{diag2(1, 2), Eigen::MatrixXd::Identity(2, 2), -1, 1});
  EXPECT_EQ(s.branch, SnbBranch::Boundary);
  EXPECT_LE((s.v - diag2(0, -1)).norm(), 1e-10);
  EXPECT_NEAR(s.primal_value, -2, 1e-10);
  // Brute force over the feasible set, which here is {-w w' : |w| = 1}.
  double best = 0;
  for (int j = 0; j < 10000; ++j) {
    const double th = M_PI * j / 10000;
    best = std::min(best, -(std::cos(th) * std::cos(th) + 2 * std::sin(th) * std::sin(th)));
  }
  EXPECT_NEAR(s.primal_value, best, 1e-6);
}

TEST(SnbLo, InactiveCutExample) {
  const auto s = snb_lo(OracleMatrixProblem<double>{diag2(2, 1), diag2(1, 0), -0.5, 1});
  EXPECT_NEAR(s.lambda_star, 0, 1e-9);
  EXPECT_LE((s.v - diag2(-1, 0)).norm(), 1e-8);
  EXPECT_NEAR(s.primal_value, -2, 1e-8);
  EXPECT_LE(inner(diag2(1, 0), s.v), -0.5);
}

TEST(SnbLo, Infeasible) {
  try {
    snb_lo(OracleMatrixProblem<double>{diag2(1, 1), Eigen::MatrixXd::Identity(2, 2), -2, 1});
    FAIL() << "expected InfeasibleOracle";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InfeasibleOracle);
  }
  EXPECT_THROW(snb_lo(OracleMatrixProblem<double>{diag2(1, 1), Eigen::MatrixXd::Zero(2, 2), -1, 1}), Error);
}

TEST(SnbLo, ZeroCost) {
  const auto s = snb_lo(OracleMatrixProblem<double>{Eigen::MatrixXd::Zero(2, 2), diag2(1, 0), -0.5, 1});
  EXPECT_EQ(s.branch, SnbBranch::ZeroCost);
  EXPECT_LE(inner(diag2(1, 0), s.v), -0.5 + 1e-12);
  EXPECT_LE(dense_nuclear_norm(s.v), 1 + 1e-12);
}

class SnbLoRandom : public ::testing::TestWithParam<bool> {};

TEST_P(SnbLoRandom, CertifiedFeasibleAndMatchesIndependentDual) {
  const bool repeated = GetParam();
  std::mt19937_64 rng(repeated ? 77 : 78);
  for (int k = 0; k < 60; ++k) {
    OracleMatrixProblem<double> p;
    p.c = repeated ? repeated_top(6, 5, 2, rng) : gaussian(6, 5, rng);
    p.a = gaussian(6, 5, rng);
    p.delta = uniform(rng, 0.5, 3);
    const double sa = dense_sigma_max(p.a);
    p.b = p.delta * sa * uniform(rng, -0.95, 1);
    const auto s = snb_lo(p);
    EXPECT_TRUE(s.certified) << "k=" << k;
    EXPECT_LE(std::abs(s.primal_value - s.dual_value), 1e-6 * (1 + std::abs(s.dual_value)));
    EXPECT_LE(dense_nuclear_norm(s.v), p.delta + 1e-8);
    EXPECT_LE(inner(p.a, s.v), p.b + 1e-8);
    EXPECT_NEAR(s.primal_value, inner(p.c, s.v), 1e-12 * (1 + std::abs(s.primal_value)));

    const double hi = 2 * p.delta * dense_sigma_max(p.c) / (p.b + p.delta * sa);
    const double ref = dual_max(p, hi);
    EXPECT_NEAR(s.primal_value, ref, 1e-6 * (1 + std::abs(ref)));
    // The bracket already contains the dual minimizer.
    EXPECT_LE(dual_max(p, 4 * hi), ref + 1e-9 * (1 + std::abs(ref)));
  }
}

INSTANTIATE_TEST_SUITE_P(Instances, SnbLoRandom, ::testing::Values(false, true));

TEST(SnbLo, LiteralModeStaysFeasible) {
  std::mt19937_64 rng(90);
  SnbOptions opts;
  opts.complementary_correction = false;
  for (int k = 0; k < 40; ++k) {
    OracleMatrixProblem<double> p{gaussian(6, 5, rng), gaussian(6, 5, rng), 0, 1};
    p.b = dense_sigma_max(p.a) * uniform(rng, -0.9, 1);
    const auto s = snb_lo(p, opts);
    EXPECT_LE(dense_nuclear_norm(s.v), p.delta + 1e-8);
    // Without the correction the cut holds only as accurately as lambda* is found.
    EXPECT_LE(inner(p.a, s.v), p.b + 1e-6 * (1 + std::abs(p.b)));
    EXPECT_GE(s.primal_value, s.dual_value - 1e-6 * (1 + std::abs(s.dual_value)));
  }
}

TEST(ProjectNuclear, Examples) {
  EXPECT_LE((project_nuclear(diag2(3, 1), 2.0) - diag2(2, 0)).norm(), 1e-12);
  const Eigen::MatrixXd inside = diag2(0.3, -0.2);
  EXPECT_EQ((project_nuclear(inside, 1.0) - inside).norm(), 0);
  std::mt19937_64 rng(2);
  const Eigen::VectorXd u = gaussian(4, 1, rng).normalized(), v = gaussian(3, 1, rng).normalized();
  const Eigen::MatrixXd uv = u * v.transpose();
  EXPECT_LE((project_nuclear(Eigen::MatrixXd(5 * uv), 1.0) - uv).norm(), 1e-12);
}

TEST(ProjectNuclear, SingularValuesMatchSimplexOracle) {
  std::mt19937_64 rng(3);
  const Eigen::MatrixXd x = 2 * gaussian(5, 4, rng);
  const Eigen::MatrixXd px = project_nuclear(x, 1.5);
  const Eigen::VectorXd expect =
      ircg::testing::brute_force_simplex_cap(Eigen::JacobiSVD<Eigen::MatrixXd>(x).singularValues(), 1.5);
  EXPECT_LE((Eigen::JacobiSVD<Eigen::MatrixXd>(px).singularValues() - expect).norm(), 1e-10);
}

TEST(ProjectNuclear, VariationalInequalityAndNonexpansive) {
  std::mt19937_64 rng(4);
  const double delta = 2;
  for (int k = 0; k < 100; ++k) {
    const Eigen::MatrixXd x = 3 * gaussian(6, 5, rng), y = 3 * gaussian(6, 5, rng);
    const Eigen::MatrixXd px = project_nuclear(x, delta), py = project_nuclear(y, delta);
    Eigen::MatrixXd z = gaussian(6, 5, rng);
    z *= delta * uniform(rng) / dense_nuclear_norm(z);
    EXPECT_LE(inner(x - px, z - px), 1e-8);
    EXPECT_LE((px - py).norm(), (x - y).norm() + 1e-12);
    EXPECT_LE(dense_nuclear_norm(px), delta + 1e-10);
  }
}

}  // namespace
