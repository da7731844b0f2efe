#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>

#include "embdim/descriptor.hpp"
#include "embdim/quadrature.hpp"
#include "embdim/special.hpp"

// Closed-form evaluation of the embedding-dimension bounds: the two-regime
// manifold lower bound (assembled from the covering-number route), the Gaussian
// random-projection upper bound, the reach-based covering bounds, and the
// chord/geodesic comparison inequalities. Everything is evaluated in log space
// where volumes or d-th powers could overflow.

namespace embdim {

enum class ReachRegime { HighReach, LowReach };

inline const char* to_string(ReachRegime r) {
  return r == ReachRegime::HighReach ? "high_reach" : "low_reach";
}

// (1/(4 sqrt(e))) * (V / omega_d)^{1/d}; the manifold is HighReach when this
// does not exceed tau.
inline double reach_regime_threshold(const ManifoldDescriptor& m) {
  m.validate();
  const double d = m.intrinsic_dim;
  const double log_ratio = (std::log(m.volume) - log_unit_ball_volume(m.intrinsic_dim)) / d;
  return std::exp(log_ratio - std::log(4.0) - 0.5);
}

// Ties classify as HighReach.
inline ReachRegime reach_regime(const ManifoldDescriptor& m) {
  return reach_regime_threshold(m) <= m.reach ? ReachRegime::HighReach : ReachRegime::LowReach;
}

struct CoveringBoundResult {
  double delta = 0.0;
  double geodesic_radius = 0.0;  // r = delta * (1 + 2 delta / tau)
  double tight_bound = 0.0;      // V / (omega_d (1 + 2 sqrt(2) r/tau)^{d-1} r^d)
  double simple_bound = 0.0;     // V / (omega_d (8 delta)^d)
};

// Lower bounds on the covering number N(M, delta) of a manifold with the given
// descriptor, valid for 0 < delta <= tau/2 (any delta when tau is infinite).
inline CoveringBoundResult covering_lower_bound(const ManifoldDescriptor& m, double delta) {
  m.validate();
  if (!(delta > 0.0) || !std::isfinite(delta))
    throw std::invalid_argument("covering_lower_bound: delta must be positive");
  if (m.has_finite_reach() && delta > 0.5 * m.reach)
    throw std::domain_error("covering_lower_bound: requires delta <= tau/2");

  const int d = m.intrinsic_dim;
  const double log_v = std::log(m.volume);
  const double log_omega = log_unit_ball_volume(d);

  CoveringBoundResult out;
  out.delta = delta;
  const double curvature_term = m.has_finite_reach() ? 2.0 * delta / m.reach : 0.0;
  out.geodesic_radius = delta * (1.0 + curvature_term);
  const double log_band = m.has_finite_reach()
                              ? (d - 1) * std::log1p(2.0 * std::numbers::sqrt2 *
                                                     out.geodesic_radius / m.reach)
                              : 0.0;
  out.tight_bound = std::exp(log_v - log_omega - log_band - d * std::log(out.geodesic_radius));
  out.simple_bound = std::exp(log_v - log_omega - d * std::log(8.0 * delta));
  return out;
}

// Volume of a geodesic ball of radius r in the hyperbolic space of constant
// curvature -2/tau^2:
//   (2 pi^{d/2} / Gamma(d/2)) * int_0^r S(x)^{d-1} dx,
//   S(x) = (tau/sqrt(2)) sinh(sqrt(2) x / tau).
// The integrand is rescaled by its value at r so the quadrature never
// overflows; infinite tau gives the Euclidean ball volume omega_d r^d.
inline double hyperbolic_ball_volume(int d, double tau, double r) {
  if (d < 1) throw std::invalid_argument("hyperbolic_ball_volume: d must be >= 1");
  if (!(r > 0.0) || !std::isfinite(r))
    throw std::invalid_argument("hyperbolic_ball_volume: r must be positive and finite");
  if (!(tau > 0.0) || std::isnan(tau))
    throw std::invalid_argument("hyperbolic_ball_volume: tau must be positive");
  if (!std::isfinite(tau) || d == 1) {
    // Flat limit, and d = 1 where the integrand is identically 1.
    return std::exp(log_unit_ball_volume(d) + d * std::log(r));
  }

  const double c = std::numbers::sqrt2 / tau;
  auto log_s = [c](double x) {
    const double y = c * x;
    // log(sinh(y)/c), stable for large y.
    const double log_sinh =
        y > 20.0 ? y - std::numbers::ln2 + std::log1p(-std::exp(-2.0 * y))
                 : std::log(std::sinh(y));
    return log_sinh - std::log(c);
  };
  const double log_sr = log_s(r);
  auto integrand = [&](double x) {
    return x <= 0.0 ? 0.0 : std::exp((d - 1) * (log_s(x) - log_sr));
  };
  const double integral = integrate_adaptive(integrand, 0.0, r, 1e-12);
  const double log_prefactor =
      std::numbers::ln2 + 0.5 * d * std::log(std::numbers::pi) - std::lgamma(0.5 * d);
  return std::exp(log_prefactor + (d - 1) * log_sr + std::log(integral));
}

struct OptimalDeltaResult {
  double delta = 0.0;
  double objective_lower_bound = 0.0;  // lower bound on sup delta^2 log(C'/delta^d)
  bool clipped = false;                // delta* fell above tau/2
  bool vacuous = false;                // nonpositive objective
};

// Maximizes delta^2 * log(C'/delta^d) over (0, tau/2] with C' = V/(omega_d 8^d).
// The unconstrained maximizer is delta* = C'^{1/d}/sqrt(e); when it exceeds
// tau/2 the endpoint is used and the objective becomes
// (d tau^2 / 4) * log(2 C'^{1/d} / tau).
inline OptimalDeltaResult optimal_delta(const ManifoldDescriptor& m) {
  m.validate();
  const int d = m.intrinsic_dim;
  const double log_cprime =
      std::log(m.volume) - log_unit_ball_volume(d) - d * std::log(8.0);
  const double delta_star = std::exp(log_cprime / d - 0.5);

  OptimalDeltaResult out;
  if (!m.has_finite_reach() || delta_star <= 0.5 * m.reach) {
    out.delta = delta_star;
    out.objective_lower_bound = 0.5 * d * delta_star * delta_star;
    return out;
  }
  out.clipped = true;
  out.delta = 0.5 * m.reach;
  out.objective_lower_bound =
      0.25 * m.reach * m.reach * (log_cprime - d * std::log(out.delta));
  out.vacuous = !(out.objective_lower_bound > 0.0);
  return out;
}

// m >= (2 c a delta / (C' b diam))^2 * log N: the covering-number route.
inline double embedding_lb_from_covering(const DistortionBudget& budget, double diam,
                                         double delta, double log_n,
                                         const BoundConstants& k = {}) {
  budget.validate();
  k.validate();
  if (!(delta > 0.0)) throw std::invalid_argument("embedding_lb_from_covering: delta must be > 0");
  if (!(diam > 0.0)) throw std::invalid_argument("embedding_lb_from_covering: diam must be > 0");
  if (!(log_n >= 0.0)) throw std::invalid_argument("embedding_lb_from_covering: log_n must be >= 0");
  const double root = 2.0 * k.sudakov_c * budget.ratio() * delta / (k.ball_width_c * diam);
  return root * root * log_n;
}

// m >= (2 a w(T) / (C' b diam(T)))^2: the Gaussian-width route.
inline double embedding_lb_from_width(const DistortionBudget& budget, double diam,
                                      double width, const BoundConstants& k = {}) {
  budget.validate();
  k.validate();
  if (!(diam > 0.0)) throw std::invalid_argument("embedding_lb_from_width: diam must be > 0");
  if (!(width >= 0.0)) throw std::invalid_argument("embedding_lb_from_width: width must be >= 0");
  const double root = 2.0 * budget.ratio() * width / (k.ball_width_c * diam);
  return root * root;
}

struct ManifoldLowerBound {
  double m_lb = 0.0;
  ReachRegime regime = ReachRegime::HighReach;
  double delta_used = 0.0;
  double log_covering = 0.0;  // log of the simple covering lower bound at delta_used
  bool vacuous = false;
  bool closed_form = false;  // evaluated via an override constant
};

// The two-regime lower bound on the epsilon-distortion embedding dimension of a
// manifold. By default it is assembled compositionally (optimal radius ->
// covering lower bound -> covering-route bound) so the emitted numbers are
// internally consistent with the configured constants; when the override for
// the active regime is set, the closed form is evaluated directly.
inline ManifoldLowerBound manifold_lower_bound(const ManifoldDescriptor& m, double eps,
                                               const BoundConstants& k = {}) {
  m.validate();
  k.validate();
  if (!(eps > 0.0 && eps < 1.0))
    throw std::invalid_argument("manifold_lower_bound: eps must lie in (0,1)");

  const int d = m.intrinsic_dim;
  const double log_omega = log_unit_ball_volume(d);
  const double log_cprime = std::log(m.volume) - log_omega - d * std::log(8.0);

  ManifoldLowerBound out;
  out.regime = reach_regime(m);
  const OptimalDeltaResult od = optimal_delta(m);
  out.delta_used = od.delta;
  out.log_covering = log_cprime - d * std::log(od.delta);

  const DistortionBudget budget = DistortionBudget::symmetric(eps);
  const double ratio2 = budget.ratio() * budget.ratio();
  const bool use_c1 = out.regime == ReachRegime::HighReach && k.override_c1.has_value();
  const bool use_c2 = out.regime == ReachRegime::LowReach && k.override_c2.has_value();

  if (use_c1) {
    out.closed_form = true;
    const double vol_term = std::exp(2.0 * (std::log(m.volume) - log_omega) / d);
    out.m_lb = *k.override_c1 * ratio2 * d * vol_term / (m.diameter * m.diameter);
    return out;
  }
  if (use_c2) {
    out.closed_form = true;
    const double log_arg =
        (std::log(m.volume) - log_omega) / d - std::log(4.0 * m.reach);
    if (!(log_arg > 0.0)) {
      out.vacuous = true;
      return out;
    }
    out.m_lb = *k.override_c2 * ratio2 * d * m.reach * m.reach * log_arg /
               (m.diameter * m.diameter);
    return out;
  }

  if (!(out.log_covering > 0.0)) {
    out.vacuous = true;
    return out;
  }
  out.m_lb = embedding_lb_from_covering(budget, m.diameter, od.delta, out.log_covering, k);
  return out;
}

struct ProjectionUpperBound {
  double m_ub = 0.0;
  bool assumption_ok = false;  // V / tau^d >= (21 / (2 sqrt(d)))^d
};

// Sufficient number of rows for an m x n Gaussian matrix (entries N(0, 1/m)) to
// be an eps-distortion embedding of the manifold with probability >= 1 - rho:
//   m >= 18 eps^-2 max(24 d + 2 d log(sqrt(d)/(tau eps^2)) + log(2 V^2), log(8/rho)).
// Requires finite reach; eps is restricted to (0, 1/3].
inline ProjectionUpperBound random_projection_upper_bound(const ManifoldDescriptor& m,
                                                          double eps, double rho) {
  m.validate();
  if (!(eps > 0.0 && eps <= 1.0 / 3.0))
    throw std::invalid_argument("random_projection_upper_bound: eps must lie in (0, 1/3]");
  if (!(rho > 0.0 && rho < 1.0))
    throw std::invalid_argument("random_projection_upper_bound: rho must lie in (0,1)");
  if (!m.has_finite_reach())
    throw std::domain_error("random_projection_upper_bound: not applicable for infinite reach");

  const double d = m.intrinsic_dim;
  const double log_v = std::log(m.volume);
  const double manifold_term = 24.0 * d +
                               2.0 * d * std::log(std::sqrt(d) / (m.reach * eps * eps)) +
                               std::numbers::ln2 + 2.0 * log_v;
  const double failure_term = std::log(8.0 / rho);

  ProjectionUpperBound out;
  out.m_ub = 18.0 / (eps * eps) * std::max(manifold_term, failure_term);
  out.assumption_ok =
      log_v - d * std::log(m.reach) >= d * (std::log(21.0 / 2.0) - 0.5 * std::log(d));
  return out;
}

// Sectional curvature range (-2/tau^2, 1/tau^2) implied by reach tau; the flat
// limit (0, 0) for infinite tau.
inline std::pair<double, double> curvature_bounds(double tau) {
  if (!(tau > 0.0) || std::isnan(tau))
    throw std::invalid_argument("curvature_bounds: tau must be positive");
  if (!std::isfinite(tau)) return {0.0, 0.0};
  return {-2.0 / (tau * tau), 1.0 / (tau * tau)};
}

// Euclidean distance is at least l - l^2/(2 tau) for points at geodesic distance l.
inline double chord_lower_from_geodesic(double l, double tau) {
  if (!(l >= 0.0)) throw std::invalid_argument("chord_lower_from_geodesic: l must be >= 0");
  if (!(tau > 0.0) || std::isnan(tau))
    throw std::invalid_argument("chord_lower_from_geodesic: tau must be positive");
  if (!std::isfinite(tau)) return l;
  return l - l * l / (2.0 * tau);
}

// Geodesic distance is at most d + 2 d^2 / tau when the chord d is <= tau/2.
inline double geodesic_upper_from_chord(double dchord, double tau) {
  if (!(dchord >= 0.0))
    throw std::invalid_argument("geodesic_upper_from_chord: chord must be >= 0");
  if (!(tau > 0.0) || std::isnan(tau))
    throw std::invalid_argument("geodesic_upper_from_chord: tau must be positive");
  if (!std::isfinite(tau)) return dchord;
  if (dchord > 0.5 * tau)
    throw std::domain_error("geodesic_upper_from_chord: requires chord <= tau/2");
  return dchord + 2.0 * dchord * dchord / tau;
}

// Lower bound for embedding N points with minimal pairwise distance delta_min
// under the sqrt(1 +- eps) budget; uses N(T, delta_min/2) = N.
inline double jl_lower_bound(long long n_points, double delta_min, double diam, double eps,
                             const BoundConstants& k = {}) {
  k.validate();
  if (n_points < 2) throw std::invalid_argument("jl_lower_bound: need at least 2 points");
  if (!(delta_min > 0.0) || !(diam > 0.0) || delta_min > diam)
    throw std::invalid_argument("jl_lower_bound: need 0 < delta_min <= diam");
  if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("jl_lower_bound: eps must lie in (0,1)");
  const double c = k.jl_c.value_or(k.composed_constant());
  const double half = 0.5 * delta_min;
  return c * ((1.0 - eps) / (1.0 + eps)) * half * half *
         std::log(static_cast<double>(n_points)) / (diam * diam);
}

struct RipLowerBound {
  double m_lb = 0.0;
  bool vacuous = false;  // n <= 2s makes the log factor nonpositive
};

// Lower bound on the number of measurements any sqrt(1 +- eps)-distortion map
// on unit-norm (s/2)-sparse vectors must take: covering-route bound with
// delta = 1/3, diam = 2, and log N = (s/4) log(n/(2s)).
inline RipLowerBound rip_lower_bound(long long n, long long s, double eps,
                                     const BoundConstants& k = {}) {
  k.validate();
  if (s < 2 || s >= n || s % 2 != 0)
    throw std::invalid_argument("rip_lower_bound: need even s with 2 <= s < n");
  if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("rip_lower_bound: eps must lie in (0,1)");

  RipLowerBound out;
  const double log_n_subsets =
      0.25 * static_cast<double>(s) * std::log(static_cast<double>(n) / (2.0 * s));
  if (!(log_n_subsets > 0.0)) {
    out.vacuous = true;
    return out;
  }
  const double c = k.rip_c.value_or(k.composed_constant());
  const double delta = 1.0 / 3.0;
  const double diam = 2.0;
  out.m_lb = c * ((1.0 - eps) / (1.0 + eps)) * delta * delta * log_n_subsets / (diam * diam);
  return out;
}

}  // namespace embdim
