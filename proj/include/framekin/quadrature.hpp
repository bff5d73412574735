#pragma once

#include <cmath>
#include <functional>

#include "framekin/dual.hpp"
#include "framekin/errors.hpp"

namespace framekin {

namespace detail {

template <class F>
double simpson_recurse(const F& f, double a, double b, double fa, double fm, double fb, double whole, double tol,
                       int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0) throw NumericError("adaptive Simpson: recursion limit reached");
  if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return simpson_recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

/// ∫_a^b f with absolute tolerance tol (adaptive Simpson, Richardson-corrected).
template <class F>
double adaptive_simpson(const F& f, double a, double b, double tol = 1e-12, int max_depth = 50) {
  if (a == b) return 0.0;
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return detail::simpson_recurse(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

/// Evaluate an antiderivative F at a dual-valued argument t, given the plain
/// value F(value_of(t)) and the integrand f as a generic callable.
///
/// With δ = t − t₀ nilpotent, F(t₀+δ) = F(t₀) + δ ∫₀¹ f(t₀ + θδ) dθ, and the
/// θ-integral is a polynomial of degree < derivative order, which 3-point
/// Gauss-Legendre integrates exactly up to third derivatives.
template <class T, class F>
T lift_antiderivative(const T& t, double value_at_t0, const F& integrand) {
  if constexpr (std::is_same_v<T, double>) {
    return value_at_t0;
  } else {
    static_assert(derivative_order_v<T> <= 5, "Gauss-Legendre rule too short for this nesting depth");
    const T t0 = constant_like(t);
    const T delta = t - t0;
    constexpr double nodes[3] = {0.5 - 0.3872983346207417, 0.5, 0.5 + 0.3872983346207417};
    constexpr double weights[3] = {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};
    T avg(0.0);
    for (int i = 0; i < 3; ++i) avg += weights[i] * integrand(t0 + nodes[i] * delta);
    return T(value_at_t0) + delta * avg;
  }
}

}  // namespace framekin
