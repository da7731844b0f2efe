#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace embdim {

// log of omega_d = pi^{d/2} / Gamma(d/2 + 1), the volume of the unit ball in R^d.
// Evaluated through lgamma so it stays finite far beyond the overflow range of
// omega_d itself (d up to several thousand).
inline double log_unit_ball_volume(int d) {
  if (d < 1) throw std::invalid_argument("unit_ball_volume: dimension must be >= 1");
  return 0.5 * d * std::log(std::numbers::pi) - std::lgamma(0.5 * d + 1.0);
}

inline double unit_ball_volume(int d) { return std::exp(log_unit_ball_volume(d)); }

// E ||g|| for g ~ N(0, I_n):  sqrt(2) * Gamma((n+1)/2) / Gamma(n/2).
inline double expected_gaussian_norm(int n) {
  if (n < 1) throw std::invalid_argument("expected_gaussian_norm: n must be >= 1");
  return std::numbers::sqrt2 *
         std::exp(std::lgamma(0.5 * (n + 1)) - std::lgamma(0.5 * n));
}

}  // namespace embdim
