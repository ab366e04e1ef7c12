#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <string>

#include "ircg/error.hpp"

namespace ircg {

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Iterates, gradients and LMO outputs. Vector instances use an n x 1 matrix;
/// matrix instances use n x p. All inner products are Frobenius.
using Point = Eigen::MatrixXd;

using Index = std::int64_t;

enum class Layout { Vector, Matrix };

inline Layout layout_of(const Point& x) {
  return x.cols() == 1 ? Layout::Vector : Layout::Matrix;
}

template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar frobenius_inner(const Eigen::MatrixBase<DerivedA>& a,
                                          const Eigen::MatrixBase<DerivedB>& b) {
  return a.cwiseProduct(b).sum();
}

template <typename Derived>
bool all_finite(const Eigen::MatrixBase<Derived>& x) {
  return x.allFinite();
}

inline void require_same_shape(const Point& a, const Point& b, const std::string& what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(ErrorCode::DimensionMismatch,
                what + ": expected " + std::to_string(b.rows()) + "x" + std::to_string(b.cols()) +
                    ", got " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
  }
}

}  // namespace ircg
