#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "embdim/estimators.hpp"
#include "embdim/point_cloud.hpp"
#include "embdim/rng.hpp"

// Combinatorial machinery behind the sparse-vector lower bound: families of
// size-(s/2) subsets of [n] with pairwise intersections below s/4, their unit
// sparse-vector realizations (pairwise distances > 1), and the empirical RIP
// distortion experiment.

namespace embdim {

struct SubsetFamily {
  int n = 0;
  int s = 0;                              // sparsity parameter; subsets have size s/2
  std::vector<std::vector<int>> subsets;  // each sorted ascending, 0-based over [0, n)

  // Largest allowed pairwise intersection: |S_j cap S_k| < s/4 with exact
  // integer semantics, i.e. <= ceil(s/4) - 1.
  int max_intersection() const { return (s + 3) / 4 - 1; }

  void validate() const;

  // Line-oriented text format: header "n s N", then one sorted
  // space-separated subset per line.
  void save(std::ostream& os) const;
  void save(const std::string& path) const {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("SubsetFamily: cannot open " + path + " for writing");
    save(os);
  }
  static SubsetFamily load(std::istream& is);
  static SubsetFamily load(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("SubsetFamily: cannot open " + path);
    return load(is);
  }
};

namespace detail {

inline int sorted_intersection_size(const std::vector<int>& a, const std::vector<int>& b) {
  int count = 0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] < b[j]) {
      ++i;
    } else if (a[i] > b[j]) {
      ++j;
    } else {
      ++count;
      ++i;
      ++j;
    }
  }
  return count;
}

}  // namespace detail

inline void SubsetFamily::validate() const {
  if (n < 1 || s < 2 || s >= n || s % 2 != 0)
    throw std::invalid_argument("SubsetFamily: need even s with 2 <= s < n");
  const std::size_t want = static_cast<std::size_t>(s) / 2;
  const int cap = max_intersection();
  for (const auto& subset : subsets) {
    if (subset.size() != want)
      throw std::invalid_argument("SubsetFamily: subset size must be s/2");
    for (std::size_t i = 0; i < subset.size(); ++i) {
      if (subset[i] < 0 || subset[i] >= n)
        throw std::invalid_argument("SubsetFamily: index out of range");
      if (i > 0 && subset[i] <= subset[i - 1])
        throw std::invalid_argument("SubsetFamily: subsets must be strictly sorted");
    }
  }
  for (std::size_t j = 0; j + 1 < subsets.size(); ++j) {
    for (std::size_t l = j + 1; l < subsets.size(); ++l) {
      if (detail::sorted_intersection_size(subsets[j], subsets[l]) > cap)
        throw std::invalid_argument("SubsetFamily: pairwise intersection too large");
    }
  }
}

inline void SubsetFamily::save(std::ostream& os) const {
  os << n << ' ' << s << ' ' << subsets.size() << '\n';
  for (const auto& subset : subsets) {
    for (std::size_t i = 0; i < subset.size(); ++i) {
      if (i > 0) os << ' ';
      os << subset[i];
    }
    os << '\n';
  }
}

inline SubsetFamily SubsetFamily::load(std::istream& is) {
  SubsetFamily out;
  std::size_t count = 0;
  if (!(is >> out.n >> out.s >> count)) throw std::invalid_argument("SubsetFamily: bad header");
  out.subsets.resize(count);
  const std::size_t want = out.s >= 2 ? static_cast<std::size_t>(out.s) / 2 : 0;
  for (auto& subset : out.subsets) {
    subset.resize(want);
    for (auto& idx : subset) {
      if (!(is >> idx)) throw std::invalid_argument("SubsetFamily: truncated subset data");
    }
  }
  out.validate();
  return out;
}

// Randomized greedy construction: draw uniform size-(s/2) subsets of [n] and
// accept those compatible with everything accepted so far, until target_n
// subsets are found or max_attempts draws have been spent. The result always
// satisfies the family invariants; its size may fall short of target_n.
// Acceptance order matters, so construction is sequential per seed.
inline SubsetFamily build_subset_family(int n, int s, int target_n, long long max_attempts,
                                        std::uint64_t seed) {
  if (s < 2 || s >= n || s % 2 != 0)
    throw std::invalid_argument("build_subset_family: need even s with 2 <= s < n");
  if (target_n < 1) throw std::invalid_argument("build_subset_family: target_n must be >= 1");
  if (max_attempts < 1) throw std::invalid_argument("build_subset_family: max_attempts must be >= 1");

  SubsetFamily family;
  family.n = n;
  family.s = s;
  const int k = s / 2;
  const int cap = family.max_intersection();
  KeyedRng rng{seed};
  std::vector<int> pool(static_cast<std::size_t>(n));
  std::iota(pool.begin(), pool.end(), 0);

  for (long long attempt = 0;
       attempt < max_attempts && static_cast<int>(family.subsets.size()) < target_n; ++attempt) {
    // Partial Fisher-Yates: the first k entries become the candidate subset.
    for (int i = 0; i < k; ++i) {
      const auto j = i + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n - i)));
      std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(j)]);
    }
    std::vector<int> candidate(pool.begin(), pool.begin() + k);
    std::sort(candidate.begin(), candidate.end());

    bool ok = true;
    for (const auto& accepted : family.subsets) {
      if (detail::sorted_intersection_size(candidate, accepted) > cap) {
        ok = false;
        break;
      }
    }
    if (ok) family.subsets.push_back(std::move(candidate));
  }
  return family;
}

struct SparseVectorSet {
  int n = 0;
  int s = 0;
  PointCloud vectors;  // count = family size, ambient_dim = n
};

// Realizes each subset S_j as the unit vector with value sqrt(2/s) on S_j.
// Squared pairwise distances equal (2/s) |S_j symdiff S_k|, hence exceed 1;
// both properties are verified on construction.
inline SparseVectorSet family_to_vectors(const SubsetFamily& family) {
  family.validate();
  if (family.subsets.empty())
    throw std::invalid_argument("family_to_vectors: family must be nonempty");
  const double value = std::sqrt(2.0 / family.s);
  std::vector<double> data(family.subsets.size() * static_cast<std::size_t>(family.n), 0.0);
  for (std::size_t j = 0; j < family.subsets.size(); ++j) {
    double* row = data.data() + j * static_cast<std::size_t>(family.n);
    for (int idx : family.subsets[j]) row[static_cast<std::size_t>(idx)] = value;
  }
  SparseVectorSet out{family.n, family.s, PointCloud(family.n, std::move(data))};
  out.vectors.label = "sparse(n=" + std::to_string(family.n) +
                      " s=" + std::to_string(family.s) + ")";

  for (std::size_t j = 0; j < out.vectors.size(); ++j) {
    const auto p = out.vectors[j];
    double norm2 = 0.0;
    for (double v : p) norm2 += v * v;
    if (std::abs(norm2 - 1.0) > 1e-12)
      throw std::logic_error("family_to_vectors: vector norm drifted from 1");
    for (std::size_t l = j + 1; l < out.vectors.size(); ++l) {
      if (!(euclidean_distance(out.vectors[j], out.vectors[l]) > 1.0))
        throw std::logic_error("family_to_vectors: pairwise distance not > 1");
    }
  }
  return out;
}

struct RipTrial {
  DistortionReport report;
  double eps_hat = 0.0;  // max(1 - a_hat^2, b_hat^2 - 1), the sqrt(1 +- eps) convention
};

// Distortion of a Gaussian (variance 1/m) projection over the sparse vectors,
// one report per trial; trial t uses the stream keyed (seed, t). With
// identity_diagnostic the projection is replaced by the identity map.
inline std::vector<RipTrial> rip_experiment(const SparseVectorSet& vectors, int m, int trials,
                                            std::uint64_t seed, bool identity_diagnostic = false) {
  if (m < 1) throw std::invalid_argument("rip_experiment: m must be >= 1");
  if (trials < 1) throw std::invalid_argument("rip_experiment: trials must be >= 1");
  const KeyedRng root(seed);
  std::vector<RipTrial> out;
  out.reserve(static_cast<std::size_t>(trials));
  for (int t = 0; t < trials; ++t) {
    RipTrial trial;
    if (identity_diagnostic) {
      trial.report = distortion(vectors.vectors, vectors.vectors);
    } else {
      const std::uint64_t key = root.derive(static_cast<std::uint64_t>(t)).next_u64();
      trial.report = distortion(vectors.vectors, gaussian_project(vectors.vectors, m, key));
    }
    trial.eps_hat = std::max(1.0 - trial.report.a_hat * trial.report.a_hat,
                             trial.report.b_hat * trial.report.b_hat - 1.0);
    out.push_back(trial);
  }
  return out;
}

}  // namespace embdim
