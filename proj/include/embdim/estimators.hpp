#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include "embdim/point_cloud.hpp"
#include "embdim/rng.hpp"

// Empirical geometry on finite point sets: greedy covering/packing nets,
// Monte Carlo Gaussian width, exact diameter and bi-Lipschitz distortion,
// Gaussian random projection, and the minimal-dimension search.

namespace embdim {

struct NetResult {
  double delta = 0.0;
  std::vector<std::size_t> center_indices;
  bool is_separated = false;  // centers pairwise more than delta apart
};

namespace detail {

// Farthest-point traversal from index 0: keeps adding the point farthest from
// the current centers while that distance exceeds delta. The result is both a
// delta-cover of the cloud and a delta-separated set.
inline std::vector<std::size_t> farthest_point_centers(const PointCloud& cloud, double delta) {
  if (!(delta > 0.0) || !std::isfinite(delta))
    throw std::invalid_argument("farthest-point traversal: delta must be positive");
  const std::size_t n = cloud.size();
  std::vector<std::size_t> centers{0};
  std::vector<double> min_dist(n);
  for (std::size_t i = 0; i < n; ++i) min_dist[i] = euclidean_distance(cloud[i], cloud[0]);
  for (;;) {
    std::size_t far = 0;
    double far_dist = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (min_dist[i] > far_dist) {
        far_dist = min_dist[i];
        far = i;
      }
    }
    if (!(far_dist > delta)) break;
    centers.push_back(far);
    for (std::size_t i = 0; i < n; ++i) {
      min_dist[i] = std::min(min_dist[i], euclidean_distance(cloud[i], cloud[far]));
    }
  }
  return centers;
}

}  // namespace detail

// Greedy delta-net: an upper proxy for the covering number of the sample.
inline NetResult greedy_net(const PointCloud& cloud, double delta) {
  NetResult out;
  out.delta = delta;
  out.center_indices = detail::farthest_point_centers(cloud, delta);
  out.is_separated = true;
  return out;
}

// Size of the greedy delta-separated subset. A delta-separated set has size at
// most N(T, delta/2), so packing_count(2 delta) certifies a lower bound on
// N(T, delta).
inline std::size_t packing_count(const PointCloud& cloud, double delta) {
  return detail::farthest_point_centers(cloud, delta).size();
}

struct WidthEstimate {
  double mean = 0.0;
  double std_error = 0.0;  // sample standard deviation / sqrt(trials)
  std::int64_t trials = 0;
  std::uint64_t seed = 0;
};

namespace detail {

// Welford accumulator shared by the width estimators.
class MeanAccumulator {
 public:
  void add(double x) {
    ++count_;
    const double d = x - mean_;
    mean_ += d / static_cast<double>(count_);
    m2_ += d * (x - mean_);
  }
  double mean() const { return mean_; }
  double std_error() const {
    return std::sqrt(m2_ / static_cast<double>(count_ - 1)) /
           std::sqrt(static_cast<double>(count_));
  }

 private:
  std::int64_t count_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

}  // namespace detail

// Monte Carlo estimate of w(T) = E sup_{x in T} <g, x> over the sample points.
// Trial t draws its Gaussian vector from the child stream (seed, t), so the
// estimate is bit-reproducible and trials could be evaluated in any order.
inline WidthEstimate gaussian_width_mc(const PointCloud& cloud, std::int64_t trials,
                                       std::uint64_t seed) {
  if (trials < 2) throw std::invalid_argument("gaussian_width_mc: need trials >= 2");
  const int n = cloud.ambient_dim();
  const KeyedRng root(seed);
  detail::MeanAccumulator acc;
  std::vector<double> g(static_cast<std::size_t>(n));
  for (std::int64_t t = 0; t < trials; ++t) {
    KeyedRng rng = root.derive(static_cast<std::uint64_t>(t));
    for (auto& v : g) v = rng.next_gaussian();
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < cloud.size(); ++i) {
      const auto p = cloud[i];
      double dot = 0.0;
      for (int j = 0; j < n; ++j) dot += g[static_cast<std::size_t>(j)] * p[j];
      best = std::max(best, dot);
    }
    acc.add(best);
  }
  return {acc.mean(), acc.std_error(), trials, seed};
}

// Exact maximal pairwise distance (quadratic scan).
inline double diameter(const PointCloud& cloud) {
  if (cloud.size() < 2) throw std::invalid_argument("diameter: need at least 2 points");
  double best = 0.0;
  for (std::size_t i = 0; i + 1 < cloud.size(); ++i) {
    for (std::size_t j = i + 1; j < cloud.size(); ++j) {
      best = std::max(best, euclidean_distance(cloud[i], cloud[j]));
    }
  }
  return best;
}

struct DistortionReport {
  double a_hat = 0.0;
  double b_hat = 0.0;
  std::pair<std::size_t, std::size_t> argmin_pair{0, 0};
  std::pair<std::size_t, std::size_t> argmax_pair{0, 0};
  std::size_t pairs_evaluated = 0;
};

// Empirical bi-Lipschitz constants of the map source[i] -> image[i]: the
// extremal ratios ||f(x)-f(y)|| / ||x-y|| over distinct pairs, with witnesses.
// Source pairs at distance zero are skipped.
inline DistortionReport distortion(const PointCloud& source, const PointCloud& image) {
  if (source.size() != image.size())
    throw std::invalid_argument("distortion: source and image must have equal point counts");
  DistortionReport out;
  out.a_hat = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < source.size(); ++i) {
    for (std::size_t j = i + 1; j < source.size(); ++j) {
      const double ds = euclidean_distance(source[i], source[j]);
      if (ds == 0.0) continue;
      const double ratio = euclidean_distance(image[i], image[j]) / ds;
      if (ratio < out.a_hat) {
        out.a_hat = ratio;
        out.argmin_pair = {i, j};
      }
      if (ratio > out.b_hat) {
        out.b_hat = ratio;
        out.argmax_pair = {i, j};
      }
      ++out.pairs_evaluated;
    }
  }
  if (out.pairs_evaluated == 0)
    throw std::domain_error("distortion: all source points coincide, no valid pairs");
  return out;
}

// Subsampled variant for clouds too large for the exact all-pairs scan: at
// most max_pairs random distinct pairs are evaluated (seeded, reproducible).
// Falls back to the exact scan when the cloud has no more pairs than that.
// The subsampled a_hat/b_hat bracket is contained in the exact one.
inline DistortionReport distortion(const PointCloud& source, const PointCloud& image,
                                   std::size_t max_pairs, std::uint64_t seed) {
  if (source.size() != image.size())
    throw std::invalid_argument("distortion: source and image must have equal point counts");
  if (max_pairs == 0) throw std::invalid_argument("distortion: max_pairs must be positive");
  const std::size_t n = source.size();
  if (n < 2 || n * (n - 1) / 2 <= max_pairs) return distortion(source, image);

  KeyedRng rng{seed};
  DistortionReport out;
  out.a_hat = std::numeric_limits<double>::infinity();
  for (std::size_t draw = 0; draw < max_pairs; ++draw) {
    std::size_t i = rng.next_below(n);
    std::size_t j = rng.next_below(n - 1);
    if (j >= i) ++j;
    if (i > j) std::swap(i, j);
    const double ds = euclidean_distance(source[i], source[j]);
    if (ds == 0.0) continue;
    const double ratio = euclidean_distance(image[i], image[j]) / ds;
    if (ratio < out.a_hat) {
      out.a_hat = ratio;
      out.argmin_pair = {i, j};
    }
    if (ratio > out.b_hat) {
      out.b_hat = ratio;
      out.argmax_pair = {i, j};
    }
    ++out.pairs_evaluated;
  }
  if (out.pairs_evaluated == 0)
    throw std::domain_error("distortion: no valid pairs among the sampled indices");
  return out;
}

// Applies a fresh m x n matrix of i.i.d. N(0, 1/m) entries, drawn row-major
// from the stream keyed by seed.
inline PointCloud gaussian_project(const PointCloud& cloud, int m, std::uint64_t seed) {
  if (m < 1) throw std::invalid_argument("gaussian_project: m must be >= 1");
  const int n = cloud.ambient_dim();
  KeyedRng rng{seed};
  const double scale = 1.0 / std::sqrt(static_cast<double>(m));
  std::vector<double> matrix(static_cast<std::size_t>(m) * static_cast<std::size_t>(n));
  for (auto& v : matrix) v = scale * rng.next_gaussian();

  std::vector<double> out(static_cast<std::size_t>(m) * cloud.size());
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const auto p = cloud[i];
    for (int r = 0; r < m; ++r) {
      const double* row = matrix.data() + static_cast<std::size_t>(r) * n;
      double acc = 0.0;
      for (int c = 0; c < n; ++c) acc += row[c] * p[c];
      out[i * static_cast<std::size_t>(m) + static_cast<std::size_t>(r)] = acc;
    }
  }
  PointCloud projected(m, std::move(out));
  projected.label = cloud.label;
  return projected;
}

namespace detail {

// Squared pairwise distances of a cloud, cached when affordable so the
// dimension search does not rescan source coordinates per candidate m.
class PairDistances {
 public:
  explicit PairDistances(const PointCloud& cloud) : cloud_(cloud) {
    const std::size_t n = cloud.size();
    if (n * (n - 1) / 2 <= kCacheLimit) {
      cache_.reserve(n * (n - 1) / 2);
      for (std::size_t i = 0; i + 1 < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
          const double d = euclidean_distance(cloud_[i], cloud_[j]);
          cache_.push_back(d * d);
        }
      }
    }
  }

  double squared(std::size_t i, std::size_t j, std::size_t n) const {
    if (!cache_.empty()) {
      const std::size_t idx = i * n - i * (i + 1) / 2 + (j - i - 1);
      return cache_[idx];
    }
    const double d = euclidean_distance(cloud_[i], cloud_[j]);
    return d * d;
  }

 private:
  static constexpr std::size_t kCacheLimit = 16u << 20;  // 128 MiB of doubles
  const PointCloud& cloud_;
  std::vector<double> cache_;
};

}  // namespace detail

// Smallest m in [1, n] for which at least ceil(success_fraction * trials) of
// the Gaussian projections onto R^m keep every pairwise distance within
// [1-eps, 1+eps], located by an exponential ramp followed by bisection.
// Trial (m, t) uses the stream keyed (seed, m, t). Returns n + 1 when no
// m <= n qualifies.
inline int minimal_embedding_dim_search(const PointCloud& cloud, double eps, int trials,
                                        double success_fraction, std::uint64_t seed) {
  if (!(eps > 0.0 && eps < 1.0))
    throw std::invalid_argument("minimal_embedding_dim_search: eps must lie in (0,1)");
  if (trials < 1) throw std::invalid_argument("minimal_embedding_dim_search: trials must be >= 1");
  if (!(success_fraction > 0.0 && success_fraction <= 1.0))
    throw std::invalid_argument("minimal_embedding_dim_search: success_fraction must lie in (0,1]");

  const int n = cloud.ambient_dim();
  const std::size_t count = cloud.size();
  const int needed =
      static_cast<int>(std::ceil(success_fraction * static_cast<double>(trials)));
  const double lo2 = (1.0 - eps) * (1.0 - eps);
  const double hi2 = (1.0 + eps) * (1.0 + eps);
  const detail::PairDistances source(cloud);
  const KeyedRng root(seed);

  auto trial_ok = [&](int m, int t) {
    const std::uint64_t key = root.derive(static_cast<std::uint64_t>(m))
                                  .derive(static_cast<std::uint64_t>(t))
                                  .next_u64();
    const PointCloud image = gaussian_project(cloud, m, key);
    for (std::size_t i = 0; i + 1 < count; ++i) {
      for (std::size_t j = i + 1; j < count; ++j) {
        const double s2 = source.squared(i, j, count);
        if (s2 == 0.0) continue;
        const double d = euclidean_distance(image[i], image[j]);
        const double r2 = d * d / s2;
        if (r2 < lo2 || r2 > hi2) return false;
      }
    }
    return true;
  };

  auto dim_ok = [&](int m) {
    int successes = 0;
    for (int t = 0; t < trials; ++t) {
      if (trial_ok(m, t)) ++successes;
      if (successes >= needed) return true;
      if (successes + (trials - 1 - t) < needed) return false;
    }
    return successes >= needed;
  };

  // Exponential ramp to the first succeeding dimension.
  int lo = 0;  // known failure (0 = sentinel below any valid m)
  int hi = -1;
  for (int m = 1;; m = std::min(2 * m, n)) {
    if (dim_ok(m)) {
      hi = m;
      break;
    }
    lo = m;
    if (m == n) return n + 1;
  }
  while (hi - lo > 1) {
    const int mid = lo + (hi - lo) / 2;
    if (dim_ok(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

}  // namespace embdim
