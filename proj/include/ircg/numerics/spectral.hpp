#pragma once

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>

#include "ircg/types.hpp"

namespace ircg {

template <typename Scalar>
struct SingularTriplet {
  Scalar sigma_max = 0;
  VectorX<Scalar> u;
  VectorX<Scalar> v;
};

template <typename Scalar>
struct Eigenspace {
  Scalar lambda_max = 0;
  /// Orthonormal columns spanning every eigenvector whose eigenvalue is within
  /// the relative gap tolerance of lambda_max.
  MatrixX<Scalar> basis;
  VectorX<Scalar> eigenvalues;

  Index dim() const { return basis.cols(); }
};

enum class SpectralMethod { Auto, Dense, Lanczos };

struct SpectralOptions {
  SpectralMethod method = SpectralMethod::Auto;
  /// Auto uses the dense Gram eigensolver when the smaller side is at most this.
  Index dense_limit = 160;
  /// sigma_max at or below this is reported as ZeroMatrix.
  double zero_tol = 1e-14;
  /// Lanczos stops when ||G y - theta y|| <= residual_tol * theta.
  double residual_tol = 1e-11;
  int krylov_dim = 24;
  int max_restarts = 400;
  std::uint64_t seed = 0x5eed5eedULL;
};

namespace detail {

/// Flip so the first coordinate of `lead` above 1e-10 in magnitude is positive.
template <typename Scalar>
void canonical_sign(VectorX<Scalar>& lead, VectorX<Scalar>& follow) {
  for (Index i = 0; i < lead.size(); ++i) {
    if (std::abs(lead(i)) > Scalar(1e-10)) {
      if (lead(i) < 0) {
        lead = -lead;
        follow = -follow;
      }
      return;
    }
  }
}

/// Leading eigenpair of a symmetric PSD operator via Lanczos with full
/// reorthogonalization, restarted from the current Ritz vector.
template <typename Scalar, typename Apply>
std::pair<Scalar, VectorX<Scalar>> lanczos_top(Apply&& apply, Index dim, const SpectralOptions& opts) {
  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  VectorX<Scalar> start(dim);
  for (Index i = 0; i < dim; ++i) start(i) = Scalar(normal(rng));
  start.normalize();

  const Index k_max = std::min<Index>(opts.krylov_dim, dim);
  MatrixX<Scalar> basis(dim, k_max);
  VectorX<Scalar> alpha(k_max), beta(k_max);
  Scalar theta = 0;
  VectorX<Scalar> ritz = start;

  for (int restart = 0; restart <= opts.max_restarts; ++restart) {
    basis.col(0) = start;
    Index k = k_max;
    for (Index j = 0; j < k_max; ++j) {
      VectorX<Scalar> w = apply(basis.col(j));
      alpha(j) = basis.col(j).dot(w);
      // Two passes of classical Gram-Schmidt against the whole basis.
      for (int pass = 0; pass < 2; ++pass) {
        w -= basis.leftCols(j + 1) * (basis.leftCols(j + 1).transpose() * w);
      }
      beta(j) = w.norm();
      if (j + 1 == k_max) break;
      if (beta(j) <= Scalar(1e-14) * std::max(std::abs(alpha(j)), Scalar(1))) {
        k = j + 1;
        break;
      }
      basis.col(j + 1) = w / beta(j);
    }

    MatrixX<Scalar> tri = MatrixX<Scalar>::Zero(k, k);
    for (Index j = 0; j < k; ++j) {
      tri(j, j) = alpha(j);
      if (j + 1 < k) tri(j, j + 1) = tri(j + 1, j) = beta(j);
    }
    Eigen::SelfAdjointEigenSolver<MatrixX<Scalar>> small(tri);
    theta = small.eigenvalues()(k - 1);
    ritz = basis.leftCols(k) * small.eigenvectors().col(k - 1);
    ritz.normalize();

    const VectorX<Scalar> residual = apply(ritz) - theta * ritz;
    if (theta <= Scalar(0) || residual.norm() <= Scalar(opts.residual_tol) * theta || k < k_max) {
      return {theta, ritz};
    }
    start = ritz;
  }
  // Clustered top eigenvalues stall the vector, not the Ritz value; the LMO
  // only needs a near-maximizing direction, so return the last Ritz pair.
  return {theta, ritz};
}

}  // namespace detail

/// Leading singular triplet (sigma, u, v) of C. v is the top eigenvector of
/// C'C (computed on the smaller Gram matrix), sigma = ||Cv|| and u = Cv / sigma.
/// Throws ZeroMatrix when sigma <= opts.zero_tol.
template <typename Derived>
SingularTriplet<typename Derived::Scalar> leading_singular_triplet(const Eigen::MatrixBase<Derived>& c,
                                                                   const SpectralOptions& opts = {}) {
  using Scalar = typename Derived::Scalar;
  require(c.size() > 0, ErrorCode::ZeroMatrix, "empty matrix");
  require(c.allFinite(), ErrorCode::NonFiniteValue, "leading_singular_triplet input");
  const MatrixX<Scalar> mat = c;
  const Index n = mat.rows(), p = mat.cols();
  const bool right_side = p <= n;
  const Index dim = right_side ? p : n;

  const bool dense = opts.method == SpectralMethod::Dense ||
                     (opts.method == SpectralMethod::Auto && dim <= opts.dense_limit);
  VectorX<Scalar> top;
  if (dense) {
    const MatrixX<Scalar> gram = right_side ? MatrixX<Scalar>(mat.transpose() * mat)
                                            : MatrixX<Scalar>(mat * mat.transpose());
    Eigen::SelfAdjointEigenSolver<MatrixX<Scalar>> eig(gram);
    top = eig.eigenvectors().col(dim - 1);
  } else {
    auto apply = [&](const auto& x) -> VectorX<Scalar> {
      if (right_side) return mat.transpose() * (mat * x);
      return mat * (mat.transpose() * x);
    };
    top = detail::lanczos_top<Scalar>(apply, dim, opts).second;
  }

  SingularTriplet<Scalar> out;
  if (right_side) {
    out.v = top;
  } else {
    const VectorX<Scalar> w = mat.transpose() * top;
    const Scalar wn = w.norm();
    if (!(wn > Scalar(opts.zero_tol))) throw Error(ErrorCode::ZeroMatrix, "sigma_max below zero tolerance");
    out.v = w / wn;
  }
  out.v.normalize();
  const VectorX<Scalar> cv = mat * out.v;
  out.sigma_max = cv.norm();
  if (!(out.sigma_max > Scalar(opts.zero_tol))) {
    throw Error(ErrorCode::ZeroMatrix, "sigma_max below zero tolerance");
  }
  out.u = cv / out.sigma_max;
  detail::canonical_sign(out.u, out.v);
  return out;
}

/// Spectral norm; zero instead of ZeroMatrix for (numerically) null input.
template <typename Derived>
typename Derived::Scalar spectral_norm(const Eigen::MatrixBase<Derived>& c, const SpectralOptions& opts = {}) {
  try {
    return leading_singular_triplet(c, opts).sigma_max;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ZeroMatrix) return 0;
    throw;
  }
}

/// Leading eigenspace of a symmetric PSD matrix: all eigenvectors with
/// eigenvalue >= (1 - rel_gap_tol) * lambda_max.
template <typename Derived>
Eigenspace<typename Derived::Scalar> leading_eigenspace(const Eigen::MatrixBase<Derived>& m,
                                                        typename Derived::Scalar rel_gap_tol = 1e-10,
                                                        const SpectralOptions& opts = {}) {
  using Scalar = typename Derived::Scalar;
  require(m.rows() == m.cols() && m.rows() > 0, ErrorCode::DimensionMismatch,
          "leading_eigenspace needs a nonempty square matrix");
  require(m.allFinite(), ErrorCode::NonFiniteValue, "leading_eigenspace input");
  const MatrixX<Scalar> sym = (m + m.transpose()) / Scalar(2);
  Eigen::SelfAdjointEigenSolver<MatrixX<Scalar>> eig(sym);
  const Index dim = sym.rows();
  const Scalar lambda_max = eig.eigenvalues()(dim - 1);
  if (!(lambda_max > Scalar(opts.zero_tol))) throw Error(ErrorCode::ZeroMatrix, "lambda_max below zero tolerance");

  const Scalar cutoff = (Scalar(1) - rel_gap_tol) * lambda_max;
  Index keep = 0;
  while (keep < dim && eig.eigenvalues()(dim - 1 - keep) >= cutoff) ++keep;

  Eigenspace<Scalar> out;
  out.lambda_max = lambda_max;
  out.basis = eig.eigenvectors().rightCols(keep).rowwise().reverse();
  out.eigenvalues = eig.eigenvalues().tail(keep).reverse();
  return out;
}

/// Leading eigenspace of P'P computed from whichever Gram matrix is smaller.
/// lambda_max equals sigma_max(P)^2.
template <typename Derived>
Eigenspace<typename Derived::Scalar> right_leading_eigenspace(const Eigen::MatrixBase<Derived>& p,
                                                              typename Derived::Scalar rel_gap_tol = 1e-10,
                                                              const SpectralOptions& opts = {}) {
  using Scalar = typename Derived::Scalar;
  const MatrixX<Scalar> mat = p;
  // The Gram eigenvalues are squared singular values.
  SpectralOptions gram_opts = opts;
  gram_opts.zero_tol = opts.zero_tol * opts.zero_tol;
  if (mat.cols() <= mat.rows()) {
    return leading_eigenspace(MatrixX<Scalar>(mat.transpose() * mat), rel_gap_tol, gram_opts);
  }
  Eigenspace<Scalar> left = leading_eigenspace(MatrixX<Scalar>(mat * mat.transpose()), rel_gap_tol, gram_opts);
  // Right singular vectors from left ones: v = P'u / sigma.
  MatrixX<Scalar> right = mat.transpose() * left.basis;
  for (Index j = 0; j < right.cols(); ++j) right.col(j) /= std::sqrt(left.eigenvalues(j));
  // Re-orthonormalize to absorb rounding in the division.
  Eigen::HouseholderQR<MatrixX<Scalar>> qr(right);
  MatrixX<Scalar> q = qr.householderQ() * MatrixX<Scalar>::Identity(right.rows(), right.cols());
  for (Index j = 0; j < q.cols(); ++j) {
    if (q.col(j).dot(right.col(j)) < 0) q.col(j) = -q.col(j);
  }
  left.basis = q;
  return left;
}

}  // namespace ircg
