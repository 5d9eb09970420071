#pragma once

#include <cmath>
#include <limits>
#include <utility>

#include "focalfluc/errors.hpp"

namespace focalfluc {

struct RootOptions {
  /// Bisection shrinks the bracket to this width before Newton takes over.
  double bisection_width = 1e-3;
  /// Stop once |g(x)| falls below this.
  double residual_tol = 1e-13;
  int max_iterations = 200;
};

/// Root of g on [lo, hi] where g(lo)·g(hi) ≤ 0.
///
/// Plain bisection down to `bisection_width`, then Newton steps that fall
/// back to bisection whenever they leave the bracket or fail to halve the
/// residual. `dg` is the derivative of `g`.
template <class G, class DG>
double solve_bracketed(G&& g, DG&& dg, double lo, double hi, const RootOptions& opts = {}) {
  double glo = g(lo);
  double ghi = g(hi);
  if (glo == 0.0) return lo;
  if (ghi == 0.0) return hi;
  if ((glo > 0.0) == (ghi > 0.0))
    throw DomainError("solve_bracketed: root not bracketed");

  int it = 0;
  while (hi - lo > opts.bisection_width && it++ < opts.max_iterations) {
    const double mid = 0.5 * (lo + hi);
    const double gm = g(mid);
    if (gm == 0.0) return mid;
    if ((gm > 0.0) == (glo > 0.0)) {
      lo = mid;
      glo = gm;
    } else {
      hi = mid;
    }
  }

  double x = 0.5 * (lo + hi);
  double gx = g(x);
  double prev_abs = std::numeric_limits<double>::infinity();
  for (; it < opts.max_iterations; ++it) {
    if (std::abs(gx) <= opts.residual_tol) return x;
    if ((gx > 0.0) == (glo > 0.0)) {
      lo = x;
      glo = gx;
    } else {
      hi = x;
    }
    if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(x)))
      return x;
    const double d = dg(x);
    double next = (d != 0.0) ? x - gx / d : lo - 1.0;
    if (!(next > lo && next < hi) || std::abs(gx) > 0.5 * prev_abs) next = 0.5 * (lo + hi);
    prev_abs = std::abs(gx);
    if (next == x) return x;
    x = next;
    gx = g(x);
  }
  throw NonConvergenceError("solve_bracketed: iteration budget exhausted", std::abs(gx));
}

}  // namespace focalfluc
