#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "embdim/sparse.hpp"

using namespace embdim;
using Catch::Approx;

namespace {

// Deterministic lexicographic greedy over all size-(s/2) subsets of [n]:
// an implementation-independent witness that the target family size is
// attainable on a given instance.
int exhaustive_greedy_family_size(int n, int s, int stop_at) {
  const int k = s / 2;
  const int cap = (s + 3) / 4 - 1;
  std::vector<std::vector<int>> accepted;
  std::vector<int> subset(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) subset[static_cast<std::size_t>(i)] = i;
  for (;;) {
    bool ok = true;
    for (const auto& other : accepted) {
      int inter = 0;
      std::size_t a = 0, b = 0;
      while (a < subset.size() && b < other.size()) {
        if (subset[a] < other[b]) ++a;
        else if (subset[a] > other[b]) ++b;
        else { ++inter; ++a; ++b; }
      }
      if (inter > cap) { ok = false; break; }
    }
    if (ok) {
      accepted.push_back(subset);
      if (static_cast<int>(accepted.size()) >= stop_at) break;
    }
    // advance to the next combination in lexicographic order
    int i = k - 1;
    while (i >= 0 && subset[static_cast<std::size_t>(i)] == n - k + i) --i;
    if (i < 0) break;
    ++subset[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j) {
      subset[static_cast<std::size_t>(j)] = subset[static_cast<std::size_t>(j - 1)] + 1;
    }
  }
  return static_cast<int>(accepted.size());
}

}  // namespace

TEST_CASE("subset family construction on the disjoint-pairs instance", "[sparse]") {
  // n=16, s=4: size-2 subsets, pairwise disjoint. The guaranteed size is
  // (16/8)^1 = 2; the greedy search does much better.
  const auto family = build_subset_family(16, 4, 8, 100000, 1);
  family.validate();
  CHECK(family.max_intersection() == 0);
  CHECK(family.subsets.size() >= 2);
}

TEST_CASE("subset family reaches the guaranteed size on the n=64 s=8 instance", "[sparse]") {
  // Guaranteed size (64/16)^2 = 16. Attainability is independently witnessed
  // by the exhaustive lexicographic greedy.
  REQUIRE(exhaustive_greedy_family_size(64, 8, 16) >= 16);

  const auto family = build_subset_family(64, 8, 16, 160000, 2);
  family.validate();
  CHECK(family.max_intersection() == 1);
  CHECK(family.subsets.size() >= 16);
}

TEST_CASE("subset family reaches the guaranteed size at n=256", "[sparse]") {
  // Guaranteed size (256/16)^2 = 256 at the top of the desk-scale range.
  const auto family = build_subset_family(256, 8, 256, 2560000, 14);
  family.validate();
  CHECK(family.subsets.size() >= 256);
}

TEST_CASE("subset family respects target and argument validation", "[sparse]") {
  const auto one = build_subset_family(16, 4, 1, 1000, 3);
  CHECK(one.subsets.size() == 1);
  CHECK_THROWS_AS(build_subset_family(16, 5, 4, 1000, 0), std::invalid_argument);
  CHECK_THROWS_AS(build_subset_family(8, 8, 4, 1000, 0), std::invalid_argument);
  CHECK_THROWS_AS(build_subset_family(8, 10, 4, 1000, 0), std::invalid_argument);
}

TEST_CASE("subset family construction is deterministic per seed", "[sparse]") {
  const auto a = build_subset_family(64, 8, 12, 50000, 4);
  const auto b = build_subset_family(64, 8, 12, 50000, 4);
  CHECK(a.subsets == b.subsets);
  const auto c = build_subset_family(64, 8, 12, 50000, 5);
  CHECK(a.subsets != c.subsets);
}

TEST_CASE("intersection threshold uses exact integer semantics", "[sparse]") {
  // s = 6: |intersection| < 1.5 means at most 1.
  SubsetFamily family;
  family.n = 12;
  family.s = 6;
  CHECK(family.max_intersection() == 1);
  family.subsets = {{0, 1, 2}, {2, 3, 4}};
  CHECK_NOTHROW(family.validate());
  family.subsets = {{0, 1, 2}, {1, 2, 3}};
  CHECK_THROWS_AS(family.validate(), std::invalid_argument);
}

TEST_CASE("family serialization round trip", "[sparse]") {
  const auto family = build_subset_family(64, 8, 10, 50000, 6);
  std::stringstream ss;
  family.save(ss);
  std::string header;
  std::getline(ss, header);
  CHECK(header == "64 8 " + std::to_string(family.subsets.size()));
  ss.seekg(0);
  const auto loaded = SubsetFamily::load(ss);
  CHECK(loaded.n == family.n);
  CHECK(loaded.s == family.s);
  CHECK(loaded.subsets == family.subsets);
}

TEST_CASE("sparse vectors are unit norm with controlled distances", "[sparse]") {
  SubsetFamily family;
  family.n = 8;
  family.s = 4;
  family.subsets = {{0, 1}, {2, 3}};
  const auto vectors = family_to_vectors(family);
  REQUIRE(vectors.vectors.size() == 2);

  for (std::size_t i = 0; i < vectors.vectors.size(); ++i) {
    double norm2 = 0.0;
    for (double v : vectors.vectors[i]) norm2 += v * v;
    CHECK(norm2 == Approx(1.0).margin(1e-12));
  }
  // Disjoint supports, s=4: squared distance (2/s)|symdiff| = 0.5 * 4 = 2.
  CHECK(euclidean_distance(vectors.vectors[0], vectors.vectors[1]) ==
        Approx(std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("sparse vector distances follow the symmetric-difference identity", "[sparse]") {
  const auto family = build_subset_family(64, 8, 16, 160000, 7);
  const auto vectors = family_to_vectors(family);
  double min_dist = 1e300;
  for (std::size_t j = 0; j + 1 < vectors.vectors.size(); ++j) {
    for (std::size_t l = j + 1; l < vectors.vectors.size(); ++l) {
      int inter = 0;
      std::size_t a = 0, b = 0;
      const auto& sj = family.subsets[j];
      const auto& sl = family.subsets[l];
      while (a < sj.size() && b < sl.size()) {
        if (sj[a] < sl[b]) ++a;
        else if (sj[a] > sl[b]) ++b;
        else { ++inter; ++a; ++b; }
      }
      const int symdiff = family.s - 2 * inter;
      const double d = euclidean_distance(vectors.vectors[j], vectors.vectors[l]);
      CHECK(d * d == Approx((2.0 / family.s) * symdiff).epsilon(1e-12));
      min_dist = std::min(min_dist, d);
    }
  }
  CHECK(min_dist > 1.0);
}

TEST_CASE("rip experiment identity diagnostic and determinism", "[sparse]") {
  const auto family = build_subset_family(64, 8, 12, 100000, 8);
  const auto vectors = family_to_vectors(family);

  const auto identity = rip_experiment(vectors, 64, 3, 9, true);
  for (const auto& trial : identity) {
    CHECK(trial.eps_hat == Approx(0.0).margin(1e-12));
  }

  const auto a = rip_experiment(vectors, 16, 5, 10);
  const auto b = rip_experiment(vectors, 16, 5, 10);
  REQUIRE(a.size() == 5);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].eps_hat == b[i].eps_hat);
    CHECK(a[i].report.a_hat == b[i].report.a_hat);
    CHECK(a[i].report.b_hat == b[i].report.b_hat);
  }
}

TEST_CASE("rip distortion shrinks as m grows", "[sparse]") {
  const auto family = build_subset_family(64, 8, 16, 160000, 11);
  const auto vectors = family_to_vectors(family);
  auto median_eps = [&](int m) {
    auto trials = rip_experiment(vectors, m, 21, 12);
    std::vector<double> eps;
    eps.reserve(trials.size());
    for (const auto& t : trials) eps.push_back(t.eps_hat);
    std::nth_element(eps.begin(), eps.begin() + eps.size() / 2, eps.end());
    return eps[eps.size() / 2];
  };
  CHECK(median_eps(4) > median_eps(64));
}
