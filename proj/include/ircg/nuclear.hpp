#pragma once

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "ircg/numerics/brent.hpp"
#include "ircg/numerics/simplex.hpp"
#include "ircg/numerics/spectral.hpp"
#include "ircg/types.hpp"

namespace ircg {

template <typename Derived>
typename Derived::Scalar nuclear_norm(const Eigen::MatrixBase<Derived>& x) {
  using Scalar = typename Derived::Scalar;
  if (x.size() == 0) return Scalar(0);
  Eigen::BDCSVD<MatrixX<Scalar>> svd(MatrixX<Scalar>(x), Eigen::ComputeThinU | Eigen::ComputeThinV);
  return svd.singularValues().sum();
}

/// argmin of Tr(C'V) over the nuclear ball of radius delta: -delta u v'.
/// Zero when C is numerically zero (every point of the ball is optimal).
template <typename Derived>
MatrixX<typename Derived::Scalar> lmo_nuclear(const Eigen::MatrixBase<Derived>& c, typename Derived::Scalar delta,
                                              const SpectralOptions& opts = {}) {
  using Scalar = typename Derived::Scalar;
  require(delta > 0, ErrorCode::InvalidArgument, "lmo_nuclear needs delta > 0");
  try {
    const SingularTriplet<Scalar> top = leading_singular_triplet(c, opts);
    return -delta * top.u * top.v.transpose();
  } catch (const Error& e) {
    if (e.code() != ErrorCode::ZeroMatrix) throw;
    return MatrixX<Scalar>::Zero(c.rows(), c.cols());
  }
}

/// The argmin face of Tr(P'V) over the nuclear ball, parametrized as
/// V(y) = -(delta / sigma) P R y y' R' for unit y. `quad` holds the
/// symmetric form S with Tr(Q'V(y)) = -(delta / sigma) y'Sy.
template <typename Scalar>
struct ArgminFace {
  MatrixX<Scalar> p;
  MatrixX<Scalar> basis;
  MatrixX<Scalar> quad;
  Scalar sigma = 0;
  Scalar delta = 0;

  MatrixX<Scalar> vertex(const VectorX<Scalar>& y) const {
    const VectorX<Scalar> v = basis * y;
    return -(delta / sigma) * (p * v) * v.transpose();
  }
  /// Value of Tr(Q'V(y)).
  Scalar value(const VectorX<Scalar>& y) const { return -(delta / sigma) * y.dot(quad * y); }
};

template <typename DerivedP, typename DerivedQ>
ArgminFace<typename DerivedP::Scalar> argmin_face(const Eigen::MatrixBase<DerivedP>& p,
                                                  const Eigen::MatrixBase<DerivedQ>& q,
                                                  typename DerivedP::Scalar delta,
                                                  typename DerivedP::Scalar rel_gap_tol = 1e-10,
                                                  const SpectralOptions& opts = {}) {
  using Scalar = typename DerivedP::Scalar;
  require(delta > 0, ErrorCode::InvalidArgument, "nb_blo needs delta > 0");
  require(p.rows() == q.rows() && p.cols() == q.cols(), ErrorCode::DimensionMismatch,
          "nb_blo needs P and Q of equal shape");
  require(q.allFinite(), ErrorCode::NonFiniteValue, "nb_blo Q");
  ArgminFace<Scalar> face;
  face.p = p;
  face.delta = delta;
  const Eigenspace<Scalar> lead = right_leading_eigenspace(face.p, rel_gap_tol, opts);
  face.sigma = std::sqrt(lead.lambda_max);
  if (!(face.sigma > Scalar(opts.zero_tol))) throw Error(ErrorCode::ZeroMatrix, "sigma_max(P) below zero tolerance");
  face.basis = lead.basis;
  const MatrixX<Scalar> qtp = q.transpose() * face.p;
  const MatrixX<Scalar> half = face.basis.transpose() * qtp * face.basis;
  face.quad = (half + half.transpose()) / Scalar(2);
  return face;
}

/// Bilevel linear oracle over the nuclear ball: among minimizers of Tr(P'V),
/// the rank-one element minimizing Tr(Q'V). Uses the leading eigenvector s1 of
/// S = R'(Q'P + P'Q)R / 2 and returns -(delta / sigma_max(P)) P (R s1)(R s1)'.
template <typename DerivedP, typename DerivedQ>
MatrixX<typename DerivedP::Scalar> nb_blo(const Eigen::MatrixBase<DerivedP>& p, const Eigen::MatrixBase<DerivedQ>& q,
                                          typename DerivedP::Scalar delta,
                                          typename DerivedP::Scalar rel_gap_tol = 1e-10,
                                          const SpectralOptions& opts = {}) {
  using Scalar = typename DerivedP::Scalar;
  const ArgminFace<Scalar> face = argmin_face(p, q, delta, rel_gap_tol, opts);
  Eigen::SelfAdjointEigenSolver<MatrixX<Scalar>> eig(face.quad);
  return face.vertex(eig.eigenvectors().col(face.quad.rows() - 1));
}

template <typename Scalar>
struct OracleMatrixProblem {
  MatrixX<Scalar> c;
  MatrixX<Scalar> a;
  Scalar b = 0;
  Scalar delta = 1;
};

enum class SnbBranch { ZeroConstraint, Boundary, ZeroCost, Slater };

struct SnbOptions {
  /// Move along the argmin face so Tr(A'V) = b when lambda* > 0, and repair
  /// slight infeasibility by mixing with the constraint's own face.
  bool complementary_correction = true;
  double rel_gap_tol = 1e-10;
  /// Relative width of the b = -delta sigma_max(A) boundary test.
  double tol_eq = 1e-9;
  double feas_tol = 1e-9;
  double cert_tol = 1e-6;
  double lambda_tol = 1e-12;
  int brent_cap = 500;
  SpectralOptions spectral;
};

template <typename Scalar>
struct SncbSolution {
  MatrixX<Scalar> v;
  Scalar lambda_star = 0;
  Scalar primal_value = 0;
  Scalar dual_value = 0;
  bool certified = false;
  SnbBranch branch = SnbBranch::Slater;
  Index eigenspace_dim = 0;
};

namespace detail {

template <typename Scalar>
Scalar trace_inner(const MatrixX<Scalar>& a, const MatrixX<Scalar>& v) {
  return a.cwiseProduct(v).sum();
}

/// Mix `v` toward `anchor` (which satisfies Tr(A'anchor) < b) until Tr(A'V) = b.
template <typename Scalar>
MatrixX<Scalar> mix_to_trace(const MatrixX<Scalar>& v, Scalar tv, const MatrixX<Scalar>& anchor, Scalar ta,
                             Scalar b) {
  if (tv <= b) return v;
  const Scalar theta = std::clamp((b - ta) / (tv - ta), Scalar(0), Scalar(1));
  return theta * v + (Scalar(1) - theta) * anchor;
}

}  // namespace detail

/// Linear oracle over the nuclear ball sliced by Tr(A'V) <= b, through the
/// one-dimensional dual min_{lambda >= 0} delta sigma_max(C + lambda A) + b lambda.
template <typename Scalar>
SncbSolution<Scalar> snb_lo(const OracleMatrixProblem<Scalar>& prob, const SnbOptions& opts = {}) {
  using Mat = MatrixX<Scalar>;
  require(prob.delta > 0, ErrorCode::InvalidArgument, "snb_lo needs delta > 0");
  require(prob.c.rows() == prob.a.rows() && prob.c.cols() == prob.a.cols(), ErrorCode::DimensionMismatch,
          "snb_lo needs C and A of equal shape");
  require(prob.c.allFinite() && prob.a.allFinite() && std::isfinite(prob.b), ErrorCode::NonFiniteValue,
          "snb_lo data");
  const Mat& c = prob.c;
  const Mat& a = prob.a;
  const Scalar b = prob.b;
  const Scalar delta = prob.delta;
  const Scalar sigma_a = spectral_norm(a, opts.spectral);
  const Scalar sigma_c = spectral_norm(c, opts.spectral);

  SncbSolution<Scalar> out;
  auto finish = [&](Mat v) {
    out.v = std::move(v);
    out.primal_value = detail::trace_inner(c, out.v);
    out.certified = std::abs(out.primal_value - out.dual_value) <= opts.cert_tol * (1 + std::abs(out.dual_value));
    return out;
  };

  if (sigma_a <= Scalar(opts.spectral.zero_tol)) {
    require(b >= -Scalar(opts.feas_tol), ErrorCode::InfeasibleOracle, "A = 0 and b < 0");
    out.branch = SnbBranch::ZeroConstraint;
    out.dual_value = -delta * sigma_c;
    return finish(lmo_nuclear(c, delta, opts.spectral));
  }

  const Scalar slack = b + delta * sigma_a;
  const Scalar scale = std::max({Scalar(1), std::abs(b), delta * sigma_a});
  if (slack < -Scalar(opts.tol_eq) * scale) {
    throw Error(ErrorCode::InfeasibleOracle, "b < -delta * sigma_max(A)");
  }
  // Constraint's own minimizing face: used as the boundary answer and as the
  // feasibility anchor in the repair step.
  const ArgminFace<Scalar> anchor_face = argmin_face(a, c, delta, Scalar(opts.rel_gap_tol), opts.spectral);
  Eigen::SelfAdjointEigenSolver<Mat> anchor_eig(anchor_face.quad);
  const Mat anchor = anchor_face.vertex(anchor_eig.eigenvectors().col(anchor_face.quad.rows() - 1));
  const Scalar anchor_trace = -delta * sigma_a;

  if (std::abs(slack) <= Scalar(opts.tol_eq) * scale) {
    // No Slater point: the feasible set is the argmin face of A itself.
    out.branch = SnbBranch::Boundary;
    out.eigenspace_dim = anchor_face.basis.cols();
    out.dual_value = anchor_face.value(anchor_eig.eigenvectors().col(anchor_face.quad.rows() - 1));
    return finish(anchor);
  }

  if (sigma_c <= Scalar(opts.spectral.zero_tol)) {
    out.branch = SnbBranch::ZeroCost;
    out.dual_value = 0;
    if (b >= 0) return finish(Mat::Zero(c.rows(), c.cols()));
    return finish(Mat((b / anchor_trace) * anchor));
  }

  out.branch = SnbBranch::Slater;
  const Scalar lambda_hi = Scalar(2) * delta * sigma_c / slack;
  auto dual_obj = [&](Scalar lambda) {
    return delta * spectral_norm(Mat(c + lambda * a), opts.spectral) + b * lambda;
  };
  BrentOptions<Scalar> bopts;
  bopts.abs_tol = Scalar(opts.lambda_tol) * std::max(Scalar(1), lambda_hi);
  bopts.rel_tol = Scalar(opts.lambda_tol);
  bopts.max_iterations = opts.brent_cap;
  const ScalarMinimum<Scalar> dual_min = brent_min(dual_obj, Scalar(0), lambda_hi, bopts);
  out.lambda_star = dual_min.argmin;
  out.dual_value = -dual_min.value;
  const Mat m = c + out.lambda_star * a;
  const Scalar sigma_m = spectral_norm(m, opts.spectral);
  if (sigma_m <= Scalar(opts.spectral.zero_tol) * std::max(Scalar(1), sigma_c)) {
    throw Error(ErrorCode::DegenerateOracle, "C + lambda* A is numerically zero");
  }
  const bool positive_lambda = out.lambda_star > Scalar(opts.lambda_tol) * std::max(Scalar(1), lambda_hi);
  const Scalar feas = Scalar(opts.feas_tol);

  if (!opts.complementary_correction) {
    const ArgminFace<Scalar> face = argmin_face(m, a, delta, Scalar(opts.rel_gap_tol), opts.spectral);
    Eigen::SelfAdjointEigenSolver<Mat> eig(face.quad);
    out.eigenspace_dim = face.basis.cols();
    return finish(face.vertex(eig.eigenvectors().col(face.quad.rows() - 1)));
  }

  bool have = false;
  Mat best;
  Scalar best_gap = std::numeric_limits<Scalar>::infinity();
  for (Scalar tau : {Scalar(opts.rel_gap_tol), Scalar(1e-8), Scalar(1e-6), Scalar(1e-4)}) {
    if (tau < Scalar(opts.rel_gap_tol)) continue;
    const ArgminFace<Scalar> face = argmin_face(m, a, delta, tau, opts.spectral);
    Eigen::SelfAdjointEigenSolver<Mat> eig(face.quad);
    const Index k = face.quad.rows();
    const Mat v_lo = face.vertex(eig.eigenvectors().col(k - 1));
    const Mat v_hi = face.vertex(eig.eigenvectors().col(0));
    const Scalar t_lo = detail::trace_inner(a, v_lo);
    const Scalar t_hi = detail::trace_inner(a, v_hi);

    Mat v;
    if (t_lo > b) {
      v = detail::mix_to_trace(v_lo, t_lo, anchor, anchor_trace, b);
    } else if (positive_lambda && t_hi > b) {
      const Scalar theta = (t_hi - b) / (t_hi - t_lo);
      v = theta * v_lo + (Scalar(1) - theta) * v_hi;
    } else if (positive_lambda) {
      v = v_hi;
    } else {
      v = v_lo;
    }
    const Scalar tv = detail::trace_inner(a, v);
    if (tv > b + feas * (1 + std::abs(b))) {
      v = detail::mix_to_trace(v, tv, anchor, anchor_trace, b);
    }
    if (nuclear_norm(v) > delta + feas || detail::trace_inner(a, v) > b + feas * (1 + std::abs(b))) continue;
    const Scalar gap = std::abs(detail::trace_inner(c, v) - out.dual_value);
    if (!have || gap < best_gap) {
      have = true;
      best = v;
      best_gap = gap;
      out.eigenspace_dim = face.basis.cols();
    }
    if (best_gap <= Scalar(opts.cert_tol) * (1 + std::abs(out.dual_value))) break;
  }
  if (!have) throw Error(ErrorCode::DegenerateOracle, "no feasible candidate on the argmin face");
  return finish(best);
}

/// Frobenius projection onto the nuclear ball: project the singular values onto
/// the capped simplex and reconstruct.
template <typename Derived>
MatrixX<typename Derived::Scalar> project_nuclear(const Eigen::MatrixBase<Derived>& x,
                                                  typename Derived::Scalar delta) {
  using Scalar = typename Derived::Scalar;
  require(delta > 0, ErrorCode::InvalidArgument, "project_nuclear needs delta > 0");
  require(x.allFinite(), ErrorCode::NonFiniteValue, "project_nuclear input");
  Eigen::BDCSVD<MatrixX<Scalar>> svd(MatrixX<Scalar>(x), Eigen::ComputeThinU | Eigen::ComputeThinV);
  const VectorX<Scalar>& s = svd.singularValues();
  if (s.sum() <= delta) return x;
  const VectorX<Scalar> s_proj = simplex_cap_projection(s, delta);
  return svd.matrixU() * s_proj.asDiagonal() * svd.matrixV().transpose();
}

}  // namespace ircg
