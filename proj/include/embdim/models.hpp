#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "embdim/descriptor.hpp"
#include "embdim/estimators.hpp"
#include "embdim/point_cloud.hpp"
#include "embdim/rng.hpp"
#include "embdim/special.hpp"

// Model manifolds with analytically known descriptors: the d-sphere r S^d in
// R^{d+1}, the flat ball r B^d in R^d, and the flat torus (product of k circles
// of radius r) in R^{2k}. These are the families every desk-scale experiment
// samples from.

namespace embdim {

enum class ModelKind { Sphere, Ball, FlatTorus };

struct ModelFamily {
  ModelKind kind = ModelKind::Sphere;
  int dim = 1;  // intrinsic dimension (circle factor count for FlatTorus)
  double radius = 1.0;

  void validate() const {
    if (dim < 1) throw std::invalid_argument("ModelFamily: dim must be >= 1");
    if (!(radius > 0.0) || !std::isfinite(radius))
      throw std::invalid_argument("ModelFamily: radius must be positive and finite");
  }
};

inline int ambient_dim(const ModelFamily& f) {
  switch (f.kind) {
    case ModelKind::Sphere: return f.dim + 1;
    case ModelKind::Ball: return f.dim;
    case ModelKind::FlatTorus: return 2 * f.dim;
  }
  return 0;
}

inline std::string family_label(const ModelFamily& f) {
  const char* name = f.kind == ModelKind::Sphere ? "sphere"
                     : f.kind == ModelKind::Ball ? "ball"
                                                 : "torus";
  return std::string(name) + "(d=" + std::to_string(f.dim) +
         " r=" + std::to_string(f.radius) + ")";
}

// Exact descriptor values:
//   Sphere(d, r):   V = 2 r^d pi^{(d+1)/2} / Gamma((d+1)/2), tau = r,   diam = 2r
//   Ball(d, r):     V = r^d omega_d,                         tau = inf, diam = 2r
//   FlatTorus(k,r): V = (2 pi r)^k,                          tau = r,   diam = 2 r sqrt(k)
inline ManifoldDescriptor descriptor(const ModelFamily& f) {
  f.validate();
  ManifoldDescriptor m;
  m.intrinsic_dim = f.dim;
  m.ambient_dim = ambient_dim(f);
  const double d = f.dim;
  switch (f.kind) {
    case ModelKind::Sphere:
      m.volume = 2.0 * std::pow(f.radius, d) *
                 std::exp(0.5 * (d + 1) * std::log(std::numbers::pi) -
                          std::lgamma(0.5 * (d + 1)));
      m.reach = f.radius;
      m.diameter = 2.0 * f.radius;
      break;
    case ModelKind::Ball:
      m.volume = std::pow(f.radius, d) * unit_ball_volume(f.dim);
      m.reach = kInfiniteReach;
      m.diameter = 2.0 * f.radius;
      break;
    case ModelKind::FlatTorus:
      m.volume = std::pow(2.0 * std::numbers::pi * f.radius, d);
      m.reach = f.radius;
      m.diameter = 2.0 * f.radius * std::sqrt(d);
      break;
  }
  return m;
}

// Uniform sample of the family. Point i draws from the child stream (seed, i),
// so extending the count leaves earlier points unchanged.
inline PointCloud sample(const ModelFamily& f, std::size_t count, std::uint64_t seed) {
  f.validate();
  if (count < 1) throw std::invalid_argument("sample: count must be >= 1");
  const int n = ambient_dim(f);
  std::vector<double> data(count * static_cast<std::size_t>(n));
  const KeyedRng root(seed);

  for (std::size_t i = 0; i < count; ++i) {
    KeyedRng rng = root.derive(i);
    double* p = data.data() + i * static_cast<std::size_t>(n);
    switch (f.kind) {
      case ModelKind::Sphere: {
        double norm2 = 0.0;
        do {
          norm2 = 0.0;
          for (int j = 0; j < n; ++j) {
            p[j] = rng.next_gaussian();
            norm2 += p[j] * p[j];
          }
        } while (norm2 == 0.0);
        const double scale = f.radius / std::sqrt(norm2);
        for (int j = 0; j < n; ++j) p[j] *= scale;
        break;
      }
      case ModelKind::Ball: {
        double norm2 = 0.0;
        do {
          norm2 = 0.0;
          for (int j = 0; j < n; ++j) {
            p[j] = rng.next_gaussian();
            norm2 += p[j] * p[j];
          }
        } while (norm2 == 0.0);
        const double u = rng.next_unit();  // (0,1]; boundary inclusive
        const double scale =
            f.radius * std::pow(u, 1.0 / static_cast<double>(f.dim)) / std::sqrt(norm2);
        for (int j = 0; j < n; ++j) p[j] *= scale;
        break;
      }
      case ModelKind::FlatTorus: {
        for (int factor = 0; factor < f.dim; ++factor) {
          const double theta = 2.0 * std::numbers::pi * rng.next_unit();
          p[2 * factor] = f.radius * std::cos(theta);
          p[2 * factor + 1] = f.radius * std::sin(theta);
        }
        break;
      }
    }
  }
  PointCloud cloud(n, std::move(data));
  cloud.truth = descriptor(f);
  cloud.label = family_label(f);
  return cloud;
}

// sup_{x in M} <g, x> evaluated exactly over the continuous family.
inline double support_value(const ModelFamily& f, std::span<const double> g) {
  f.validate();
  if (static_cast<int>(g.size()) != ambient_dim(f))
    throw std::invalid_argument("support_value: g must have the family's ambient dimension");
  switch (f.kind) {
    case ModelKind::Sphere:
    case ModelKind::Ball: {
      double norm2 = 0.0;
      for (double v : g) norm2 += v * v;
      return f.radius * std::sqrt(norm2);
    }
    case ModelKind::FlatTorus: {
      double acc = 0.0;
      for (int factor = 0; factor < f.dim; ++factor) {
        acc += std::hypot(g[2 * factor], g[2 * factor + 1]);
      }
      return f.radius * acc;
    }
  }
  return 0.0;
}

// Monte Carlo Gaussian width with the per-trial supremum taken exactly over the
// continuous family (the dense-sample limit of gaussian_width_mc). Uses the
// same (seed, trial) stream scheme as the cloud estimator.
inline WidthEstimate gaussian_width_mc_exact(const ModelFamily& f, std::int64_t trials,
                                             std::uint64_t seed) {
  f.validate();
  if (trials < 2) throw std::invalid_argument("gaussian_width_mc_exact: need trials >= 2");
  const int n = ambient_dim(f);
  const KeyedRng root(seed);
  detail::MeanAccumulator acc;
  std::vector<double> g(static_cast<std::size_t>(n));
  for (std::int64_t t = 0; t < trials; ++t) {
    KeyedRng rng = root.derive(static_cast<std::uint64_t>(t));
    for (auto& v : g) v = rng.next_gaussian();
    acc.add(support_value(f, g));
  }
  return {acc.mean(), acc.std_error(), trials, seed};
}

// Closed-form Gaussian widths of the families: E chi_n for sphere/ball (in the
// ambient dimension), and k * sqrt(pi/2) per circle factor for the flat torus.
inline double width_closed_form(const ModelFamily& f) {
  f.validate();
  switch (f.kind) {
    case ModelKind::Sphere:
    case ModelKind::Ball:
      return f.radius * expected_gaussian_norm(ambient_dim(f));
    case ModelKind::FlatTorus:
      return f.radius * f.dim * std::sqrt(0.5 * std::numbers::pi);
  }
  return 0.0;
}

// Isometric embedding into R^{target_dim} by a seeded random matrix with
// orthonormal columns (two rounds of modified Gram-Schmidt on a Gaussian
// matrix), plus an optional seeded translation. The truth descriptor carries
// over unchanged.
inline PointCloud embed_isometric(const PointCloud& cloud, int target_dim, std::uint64_t seed,
                                  bool translate = false) {
  const int k = cloud.ambient_dim();
  if (target_dim < k)
    throw std::invalid_argument("embed_isometric: target_dim must be >= ambient_dim");
  KeyedRng rng{seed};

  // Column-major n x k basis.
  const std::size_t n = static_cast<std::size_t>(target_dim);
  std::vector<std::vector<double>> q(static_cast<std::size_t>(k));
  for (int j = 0; j < k; ++j) {
    auto& col = q[static_cast<std::size_t>(j)];
    for (;;) {
      col.assign(n, 0.0);
      for (auto& v : col) v = rng.next_gaussian();
      for (int pass = 0; pass < 2; ++pass) {
        for (int i = 0; i < j; ++i) {
          const auto& prev = q[static_cast<std::size_t>(i)];
          double dot = 0.0;
          for (std::size_t r = 0; r < n; ++r) dot += prev[r] * col[r];
          for (std::size_t r = 0; r < n; ++r) col[r] -= dot * prev[r];
        }
      }
      double norm2 = 0.0;
      for (double v : col) norm2 += v * v;
      if (norm2 > 1e-24) {  // re-draw on (astronomically unlikely) degeneracy
        const double inv = 1.0 / std::sqrt(norm2);
        for (auto& v : col) v *= inv;
        break;
      }
    }
  }

  std::vector<double> offset(n, 0.0);
  if (translate) {
    for (auto& v : offset) v = rng.next_gaussian();
  }

  std::vector<double> data(cloud.size() * n);
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const auto p = cloud[i];
    double* out = data.data() + i * n;
    for (std::size_t r = 0; r < n; ++r) out[r] = offset[r];
    for (int j = 0; j < k; ++j) {
      const auto& col = q[static_cast<std::size_t>(j)];
      const double x = p[j];
      for (std::size_t r = 0; r < n; ++r) out[r] += x * col[r];
    }
  }
  PointCloud embedded(target_dim, std::move(data));
  embedded.truth = cloud.truth;
  embedded.label = cloud.label;
  return embedded;
}

}  // namespace embdim
