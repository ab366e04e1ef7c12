#pragma once

#include <cmath>
#include <limits>
#include <string>

#include "ircg/error.hpp"

namespace ircg {

template <typename Scalar>
struct ScalarMinimum {
  Scalar argmin;
  Scalar value;
  int evaluations = 0;
};

template <typename Scalar>
struct BrentOptions {
  Scalar abs_tol = Scalar(1e-8);
  /// Relative part of the stopping width. sqrt(eps) is the usual floor for
  /// smooth minima; kinked objectives (spectral duals) benefit from less.
  Scalar rel_tol = std::sqrt(std::numeric_limits<Scalar>::epsilon());
  int max_iterations = 100;
};

/// Bounded Brent minimization (golden section with parabolic interpolation) on
/// [lo, hi]. Both endpoints are also evaluated and win ties, so monotone
/// objectives return the exact boundary.
template <typename Scalar, typename F>
ScalarMinimum<Scalar> brent_min(F&& f, Scalar lo, Scalar hi, const BrentOptions<Scalar>& opts) {
  require(lo < hi, ErrorCode::InvalidArgument, "brent_min needs lo < hi");
  require(opts.abs_tol > 0, ErrorCode::InvalidArgument, "brent_min needs tol > 0");

  const Scalar golden = Scalar(0.5) * (Scalar(3) - std::sqrt(Scalar(5)));
  int evals = 0;
  auto eval = [&](Scalar x) {
    ++evals;
    const Scalar y = f(x);
    if (!std::isfinite(y)) {
      throw Error(ErrorCode::NonFiniteValue, "brent_min objective not finite at " + std::to_string(x));
    }
    return y;
  };

  Scalar a = lo, b = hi;
  Scalar x = a + golden * (b - a);
  Scalar w = x, v = x;
  Scalar fx = eval(x);
  Scalar fw = fx, fv = fx;
  Scalar d = 0, e = 0;

  int iter = 0;
  for (;;) {
    const Scalar xm = Scalar(0.5) * (a + b);
    const Scalar tol1 = opts.rel_tol * std::abs(x) + opts.abs_tol / Scalar(3);
    const Scalar tol2 = Scalar(2) * tol1;
    if (std::abs(x - xm) <= tol2 - Scalar(0.5) * (b - a)) break;
    if (++iter > opts.max_iterations) {
      throw Error(ErrorCode::NonConvergence,
                  "brent_min exceeded " + std::to_string(opts.max_iterations) + " iterations");
    }

    bool use_golden = true;
    if (std::abs(e) > tol1) {
      Scalar r = (x - w) * (fx - fv);
      Scalar q = (x - v) * (fx - fw);
      Scalar p = (x - v) * q - (x - w) * r;
      q = Scalar(2) * (q - r);
      if (q > 0) p = -p;
      q = std::abs(q);
      const Scalar e_prev = e;
      e = d;
      if (std::abs(p) < std::abs(Scalar(0.5) * q * e_prev) && p > q * (a - x) && p < q * (b - x)) {
        d = p / q;
        const Scalar u = x + d;
        if (u - a < tol2 || b - u < tol2) d = (xm >= x) ? tol1 : -tol1;
        use_golden = false;
      }
    }
    if (use_golden) {
      e = (x >= xm) ? a - x : b - x;
      d = golden * e;
    }

    const Scalar step = (std::abs(d) >= tol1) ? d : (d >= 0 ? tol1 : -tol1);
    const Scalar u = x + step;
    const Scalar fu = eval(u);

    if (fu <= fx) {
      if (u >= x) a = x; else b = x;
      v = w; fv = fw;
      w = x; fw = fx;
      x = u; fx = fu;
    } else {
      if (u < x) a = u; else b = u;
      if (fu <= fw || w == x) {
        v = w; fv = fw;
        w = u; fw = fu;
      } else if (fu <= fv || v == x || v == w) {
        v = u; fv = fu;
      }
    }
  }

  ScalarMinimum<Scalar> best{x, fx, 0};
  for (Scalar end : {lo, hi}) {
    const Scalar fe = eval(end);
    if (fe <= best.value) best = {end, fe, 0};
  }
  best.evaluations = evals;
  return best;
}

template <typename Scalar, typename F>
ScalarMinimum<Scalar> brent_min(F&& f, Scalar lo, Scalar hi, Scalar tol, int max_iterations = 100) {
  BrentOptions<Scalar> opts;
  opts.abs_tol = tol;
  opts.max_iterations = max_iterations;
  return brent_min(std::forward<F>(f), lo, hi, opts);
}

}  // namespace ircg
