#pragma once

#include <algorithm>
#include <functional>
#include <vector>

#include "ircg/types.hpp"

namespace ircg {

/// Euclidean projection onto the unit capped simplex {y >= 0, 1'y <= 1}.
/// Clips to the nonnegative orthant; if the mass still exceeds one, the cap is
/// active and the sort-and-threshold rule of the probability simplex applies.
template <typename Derived>
VectorX<typename Derived::Scalar> project_unit_capped_simplex(const Eigen::MatrixBase<Derived>& x) {
  using Scalar = typename Derived::Scalar;
  const VectorX<Scalar> xv = x;
  VectorX<Scalar> clipped = xv.cwiseMax(Scalar(0));
  if (clipped.sum() <= Scalar(1)) return clipped;

  std::vector<Scalar> sorted(xv.data(), xv.data() + xv.size());
  std::sort(sorted.begin(), sorted.end(), std::greater<Scalar>());
  Scalar cumsum = 0;
  Scalar threshold = 0;
  for (std::size_t j = 0; j < sorted.size(); ++j) {
    cumsum += sorted[j];
    const Scalar candidate = (cumsum - Scalar(1)) / Scalar(j + 1);
    if (sorted[j] - candidate > 0) threshold = candidate;
  }
  return (xv.array() - threshold).cwiseMax(Scalar(0)).matrix();
}

/// Projection onto S_delta = {y >= 0, 1'y <= delta}, via P_delta(x) = delta * P_1(x / delta).
template <typename Derived>
VectorX<typename Derived::Scalar> simplex_cap_projection(const Eigen::MatrixBase<Derived>& x,
                                                          typename Derived::Scalar delta) {
  require(delta > 0, ErrorCode::InvalidArgument, "simplex_cap_projection needs delta > 0");
  require(x.allFinite(), ErrorCode::NonFiniteValue, "simplex_cap_projection input");
  const VectorX<typename Derived::Scalar> scaled = x / delta;
  return delta * project_unit_capped_simplex(scaled);
}

}  // namespace ircg
