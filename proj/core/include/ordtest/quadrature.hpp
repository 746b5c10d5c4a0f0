#pragma once

#include <cmath>
#include <string>
#include <utility>

#include "ordtest/errors.hpp"

namespace ordtest {

namespace detail {

struct SimpsonState {
  int leaves_at_depth_limit = 0;
  // Richardson estimate of the error still unresolved at the depth limit
  double unresolved = 0.0;
};

template <typename F>
double simpson_rec(const F& f, double a, double fa, double b, double fb,
                   double m, double fm, double whole, double tol, int depth,
                   SimpsonState& state) {
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double residual = left + right - whole;
  if (std::fabs(residual) <= 15.0 * tol || depth <= 0) {
    if (depth <= 0 && std::fabs(residual) > 15.0 * tol) {
      ++state.leaves_at_depth_limit;
      state.unresolved += std::fabs(residual) / 15.0;
    }
    return left + right + residual / 15.0;
  }
  return simpson_rec(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1, state) +
         simpson_rec(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1, state);
}

}  // namespace detail

/// Adaptive Simpson integration of f over [a, b] to absolute tolerance tol.
/// Throws NumericError when the recursion bottoms out before the local
/// tolerance is met, or when f evaluates to a non-finite value.
template <typename F>
double adaptive_simpson(F&& f, double a, double b, double tol = 1e-10,
                        int max_depth = 60) {
  if (a == b) return 0.0;
  const double fa = f(a);
  const double fb = f(b);
  const double m = 0.5 * (a + b);
  const double fm = f(m);
  if (!std::isfinite(fa) || !std::isfinite(fb) || !std::isfinite(fm)) {
    throw NumericError("adaptive_simpson: integrand not finite on [" +
                       std::to_string(a) + ", " + std::to_string(b) + "]");
  }
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  detail::SimpsonState state;
  const double result =
      detail::simpson_rec(f, a, fa, b, fb, m, fm, whole, tol, max_depth, state);
  // leaves stopped by the depth cap are fine as long as their combined
  // error estimate stays inside the budget
  if (state.unresolved > tol) {
    throw NumericError("adaptive_simpson: tolerance " + std::to_string(tol) +
                       " not reached; estimated error " +
                       std::to_string(state.unresolved) + " across " +
                       std::to_string(state.leaves_at_depth_limit) +
                       " depth-limited subinterval(s)");
  }
  if (!std::isfinite(result)) {
    throw NumericError("adaptive_simpson: non-finite result");
  }
  return result;
}

}  // namespace ordtest
