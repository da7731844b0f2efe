#pragma once

#include <cmath>
#include <stdexcept>

namespace embdim {

namespace detail {

template <class F>
double simpson(F& f, double a, double fa, double b, double fb, double m, double fm) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

template <class F>
double adapt(F& f, double a, double fa, double b, double fb, double m, double fm,
             double whole, double tol, int depth) {
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = simpson(f, a, fa, m, fm, lm, flm);
  const double right = simpson(f, m, fm, b, fb, rm, frm);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
    return left + right + delta / 15.0;
  }
  return adapt(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
         adapt(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

// Adaptive Simpson quadrature with Richardson extrapolation. rel_tol is
// interpreted against a coarse first estimate of |integral|; the integrand is
// assumed smooth (no singularity handling).
template <class F>
double integrate_adaptive(F&& f, double a, double b, double rel_tol = 1e-12) {
  if (!(std::isfinite(a) && std::isfinite(b))) {
    throw std::invalid_argument("integrate_adaptive: endpoints must be finite");
  }
  if (a == b) return 0.0;
  const double fa = f(a);
  const double fb = f(b);
  const double m = 0.5 * (a + b);
  const double fm = f(m);
  const double whole = detail::simpson(f, a, fa, b, fb, m, fm);
  double scale = std::abs(whole);
  if (scale == 0.0) scale = (b - a);  // fall back to an absolute tolerance
  return detail::adapt(f, a, fa, b, fb, m, fm, whole, rel_tol * scale, 48);
}

}  // namespace embdim
