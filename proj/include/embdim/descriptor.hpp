#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>

namespace embdim {

inline constexpr double kInfiniteReach = std::numeric_limits<double>::infinity();

// The geometric data every bound consumes: intrinsic dimension d, d-volume V,
// reach tau (+infinity allowed, e.g. for affine pieces), extrinsic diameter,
// and optionally the ambient dimension.
struct ManifoldDescriptor {
  int intrinsic_dim = 1;
  double volume = 1.0;
  double reach = kInfiniteReach;
  double diameter = 1.0;
  std::optional<int> ambient_dim;

  void validate() const {
    if (intrinsic_dim < 1) throw std::invalid_argument("descriptor: intrinsic_dim must be >= 1");
    if (!(volume > 0.0) || !std::isfinite(volume))
      throw std::invalid_argument("descriptor: volume must be positive and finite");
    if (!(reach > 0.0) || std::isnan(reach))
      throw std::invalid_argument("descriptor: reach must be positive (infinity allowed)");
    if (!(diameter > 0.0) || !std::isfinite(diameter))
      throw std::invalid_argument("descriptor: diameter must be positive and finite");
    if (ambient_dim && *ambient_dim < intrinsic_dim)
      throw std::invalid_argument("descriptor: ambient_dim must be >= intrinsic_dim");
  }

  bool has_finite_reach() const { return std::isfinite(reach); }

  // Image of the descriptor under x -> lambda * x.
  ManifoldDescriptor rescaled(double lambda) const {
    if (!(lambda > 0.0)) throw std::invalid_argument("rescaled: lambda must be positive");
    ManifoldDescriptor out = *this;
    out.volume = volume * std::pow(lambda, intrinsic_dim);
    out.reach = reach * lambda;
    out.diameter = diameter * lambda;
    return out;
  }
};

// Bi-Lipschitz budget a ||x-y|| <= ||f(x)-f(y)|| <= b ||x-y||.
struct DistortionBudget {
  double lower = 1.0;
  double upper = 1.0;

  static DistortionBudget symmetric(double eps) {
    if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("budget: eps must lie in (0,1)");
    return {1.0 - eps, 1.0 + eps};
  }

  // The sqrt(1 +- eps) convention used for RIP-style statements.
  static DistortionBudget sqrt_symmetric(double eps) {
    if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("budget: eps must lie in (0,1)");
    return {std::sqrt(1.0 - eps), std::sqrt(1.0 + eps)};
  }

  double ratio() const { return lower / upper; }

  void validate() const {
    if (!(lower > 0.0) || !(upper > 0.0) || !(lower <= upper))
      throw std::invalid_argument("budget: need 0 < a <= b");
  }
};

// The universal constants the closed-form bounds leave unspecified.
//
//   sudakov_c     c in Sudakov's minoration  w(T) >= c * delta * sqrt(log N(T, delta))
//   ball_width_c  C' in w(B_2^m) <= C' * sqrt(m)
//
// The composed covering-route constant is K = (2 * sudakov_c / ball_width_c)^2.
// The compositional manifold bound coincides with the closed two-regime forms at
// C1 = K / (128 e) and C2 = K / 4; override_c1/override_c2 switch the evaluation
// to those closed forms directly. jl_c and rip_c, when set, replace K in the
// finite-set and sparse-vector bounds.
struct BoundConstants {
  double sudakov_c = 0.25;
  double ball_width_c = 1.0;
  std::optional<double> override_c1;
  std::optional<double> override_c2;
  std::optional<double> jl_c;
  std::optional<double> rip_c;

  double composed_constant() const {
    const double k = 2.0 * sudakov_c / ball_width_c;
    return k * k;
  }

  void validate() const {
    auto pos = [](double v) { return v > 0.0 && std::isfinite(v); };
    if (!pos(sudakov_c) || !pos(ball_width_c))
      throw std::invalid_argument("constants: sudakov_c and ball_width_c must be positive");
    for (const auto& opt : {override_c1, override_c2, jl_c, rip_c}) {
      if (opt && !pos(*opt)) throw std::invalid_argument("constants: overrides must be positive");
    }
  }
};

}  // namespace embdim
