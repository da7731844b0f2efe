#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "embdim/estimators.hpp"
#include "embdim/models.hpp"
#include "embdim/point_cloud.hpp"

using namespace embdim;
using Catch::Approx;

namespace {

PointCloud two_points(double distance) {
  return PointCloud(1, {0.0, distance});
}

PointCloud circle_cloud(std::size_t count, std::uint64_t seed = 1) {
  return sample({ModelKind::Sphere, 1, 1.0}, count, seed);
}

// Exact circle covering number (balls of radius delta centered on the circle
// cover arcs of half-angle 2 asin(delta/2)).
std::size_t circle_covering_number(double delta) {
  return static_cast<std::size_t>(
      std::ceil(std::numbers::pi / (2.0 * std::asin(delta / 2.0))));
}

void check_net_properties(const PointCloud& cloud, const NetResult& net) {
  // Cover: every point within delta of some center.
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t c : net.center_indices) {
      best = std::min(best, euclidean_distance(cloud[i], cloud[c]));
    }
    REQUIRE(best <= net.delta);
  }
  // Separation: centers pairwise more than delta apart.
  for (std::size_t a = 0; a + 1 < net.center_indices.size(); ++a) {
    for (std::size_t b = a + 1; b < net.center_indices.size(); ++b) {
      REQUIRE(euclidean_distance(cloud[net.center_indices[a]],
                                 cloud[net.center_indices[b]]) > net.delta);
    }
  }
}

}  // namespace

TEST_CASE("greedy net on degenerate inputs", "[estimators]") {
  const PointCloud single(3, {1.0, 2.0, 3.0});
  CHECK(greedy_net(single, 0.1).center_indices.size() == 1);

  const auto pair = two_points(1.0);
  CHECK(greedy_net(pair, 0.4).center_indices.size() == 2);
  CHECK(greedy_net(pair, 1.5).center_indices.size() == 1);
  CHECK_THROWS_AS(greedy_net(pair, 0.0), std::invalid_argument);
}

TEST_CASE("greedy net on a dense circle sample", "[estimators]") {
  const auto cloud = circle_cloud(5000);
  const auto net = greedy_net(cloud, 0.5);
  check_net_properties(cloud, net);
  // The net is a 0.5-cover of an essentially dense sample, so it has at least
  // N(S^1, 0.5+gap) = 7 centers; being 0.5-separated it has at most 12
  // (13 angular gaps each > 2 asin(0.25) would sum past 2 pi).
  CHECK(net.center_indices.size() >= 7);
  CHECK(net.center_indices.size() <= 12);
}

TEST_CASE("greedy net size is monotone in delta", "[estimators]") {
  const auto cloud = circle_cloud(800, 9);
  std::size_t prev = cloud.size() + 1;
  for (double delta : {0.05, 0.1, 0.2, 0.4, 0.8, 1.6}) {
    const std::size_t size = greedy_net(cloud, delta).center_indices.size();
    CHECK(size <= prev);
    prev = size;
  }
}

TEST_CASE("packing count basics", "[estimators]") {
  CHECK(packing_count(two_points(1.0), 0.9) == 2);
  CHECK(packing_count(two_points(1.0), 1.0) == 1);  // strict separation required
}

TEST_CASE("packing count matches brute force on colinear points", "[estimators]") {
  // 11 equally spaced points, spacing 0.1.
  std::vector<double> xs;
  for (int i = 0; i <= 10; ++i) xs.push_back(0.1 * i);
  const PointCloud cloud(1, std::move(xs));

  // Brute-force maximal 0.35-separated subset over all 2^11 subsets.
  std::size_t best = 0;
  for (unsigned mask = 1; mask < (1u << 11); ++mask) {
    std::vector<std::size_t> chosen;
    for (std::size_t i = 0; i < 11; ++i) {
      if (mask & (1u << i)) chosen.push_back(i);
    }
    bool separated = true;
    for (std::size_t a = 0; a + 1 < chosen.size() && separated; ++a) {
      for (std::size_t b = a + 1; b < chosen.size(); ++b) {
        if (!(euclidean_distance(cloud[chosen[a]], cloud[chosen[b]]) > 0.35)) {
          separated = false;
          break;
        }
      }
    }
    if (separated) best = std::max(best, chosen.size());
  }
  REQUIRE(best == 3);
  CHECK(packing_count(cloud, 0.35) == 3);
}

TEST_CASE("packing count on the circle respects the covering sandwich", "[estimators]") {
  const auto cloud = circle_cloud(5000);
  const std::size_t count = packing_count(cloud, 1.0);
  // Any 1.0-separated set has size at most N(S^1, 0.5) = 7. The farthest-point
  // traversal lands on four compass-like points (the fifth candidate sits
  // ~0.765 from its nearest center), so the greedy value is exactly 4.
  CHECK(count == 4);
  CHECK(count <= circle_covering_number(0.5));
}

TEST_CASE("gaussian width of a singleton is zero in expectation", "[estimators]") {
  const PointCloud single(5, {0.2, -0.1, 0.4, 0.0, 1.0});
  const auto est = gaussian_width_mc(single, 20000, 11);
  CHECK(std::abs(est.mean) <= 3.0 * est.std_error);
}

TEST_CASE("gaussian width of a symmetric two-point set", "[estimators]") {
  // T = {-v, v} with ||v|| = 1: w(T) = E|<g, v>| = sqrt(2/pi).
  const double inv = 1.0 / std::sqrt(3.0);
  const PointCloud cloud(3, {inv, inv, inv, -inv, -inv, -inv});
  const auto est = gaussian_width_mc(cloud, 100000, 123);
  CHECK(std::abs(est.mean - std::sqrt(2.0 / std::numbers::pi)) <= 3.0 * est.std_error);
  CHECK(est.std_error < 0.01);
}

TEST_CASE("gaussian width estimates are bit-reproducible", "[estimators]") {
  const auto cloud = circle_cloud(50, 3);
  const auto a = gaussian_width_mc(cloud, 500, 77);
  const auto b = gaussian_width_mc(cloud, 500, 77);
  CHECK(a.mean == b.mean);
  CHECK(a.std_error == b.std_error);
  const auto c = gaussian_width_mc(cloud, 500, 78);
  CHECK(a.mean != c.mean);
  CHECK_THROWS_AS(gaussian_width_mc(cloud, 1, 0), std::invalid_argument);
}

TEST_CASE("width sandwich under a bounded-singular-value linear map", "[estimators]") {
  // Map R^8 -> R^8 with singular values spread across [0.5, 2]: the width of
  // the image is pinched between a w(T) and b w(T).
  const int dim = 8;
  const auto cloud = sample({ModelKind::Ball, dim, 1.0}, 100, 21);

  const auto left = embed_isometric(cloud, dim, 501);   // random rotation U
  std::vector<double> scaled(left.flat());
  std::vector<double> sv(dim);
  for (int j = 0; j < dim; ++j) sv[j] = 0.5 + 1.5 * j / (dim - 1.0);
  for (std::size_t i = 0; i < left.size(); ++i) {
    for (int j = 0; j < dim; ++j) scaled[i * dim + j] *= sv[j];
  }
  PointCloud mapped = embed_isometric(PointCloud(dim, std::move(scaled)), dim, 502);

  const auto w_src = gaussian_width_mc(cloud, 4000, 1000);
  const auto w_img = gaussian_width_mc(mapped, 4000, 1001);
  const double sigma_left =
      std::sqrt(0.25 * w_src.std_error * w_src.std_error + w_img.std_error * w_img.std_error);
  const double sigma_right =
      std::sqrt(4.0 * w_src.std_error * w_src.std_error + w_img.std_error * w_img.std_error);
  CHECK(0.5 * w_src.mean - 3.0 * sigma_left <= w_img.mean);
  CHECK(w_img.mean <= 2.0 * w_src.mean + 3.0 * sigma_right);
}

TEST_CASE("sudakov minoration is consistent at the default constant", "[estimators]") {
  const double c = 0.25;
  const std::vector<PointCloud> clouds = {
      two_points(2.0),
      circle_cloud(500, 4),
      sample({ModelKind::Ball, 4, 1.0}, 400, 5),
  };
  for (const auto& cloud : clouds) {
    const auto width = gaussian_width_mc(cloud, 20000, 17);
    for (double delta : {0.1, 0.25, 0.5, 1.0}) {
      // packing_count(2 delta) certifies N(T, delta) >= count.
      const double log_n = std::log(static_cast<double>(packing_count(cloud, 2.0 * delta)));
      CHECK(c * delta * std::sqrt(log_n) <= width.mean + 3.0 * width.std_error);
    }
  }
}

TEST_CASE("diameter", "[estimators]") {
  CHECK(diameter(two_points(1.0)) == Approx(1.0));
  const PointCloud square(2, {0, 0, 1, 0, 0, 1, 1, 1});
  CHECK(diameter(square) == Approx(std::numbers::sqrt2).epsilon(1e-12));
  CHECK_THROWS_AS(diameter(PointCloud(2, {1.0, 2.0})), std::invalid_argument);
}

TEST_CASE("distortion of identity and scaling maps", "[estimators]") {
  const auto cloud = circle_cloud(60, 8);
  const auto id = distortion(cloud, cloud);
  CHECK(id.a_hat == Approx(1.0).epsilon(1e-12));
  CHECK(id.b_hat == Approx(1.0).epsilon(1e-12));
  CHECK(id.pairs_evaluated == 60 * 59 / 2);

  std::vector<double> doubled(cloud.flat());
  for (auto& v : doubled) v *= 2.0;
  const auto two = distortion(cloud, PointCloud(cloud.ambient_dim(), std::move(doubled)));
  CHECK(two.a_hat == Approx(2.0).epsilon(1e-12));
  CHECK(two.b_hat == Approx(2.0).epsilon(1e-12));
}

TEST_CASE("distortion is scale equivariant", "[estimators]") {
  const auto source = sample({ModelKind::Ball, 3, 1.0}, 40, 13);
  const auto image = gaussian_project(source, 2, 99);
  const auto base = distortion(source, image);
  for (double lambda : {0.25, 3.0}) {
    std::vector<double> scaled(image.flat());
    for (auto& v : scaled) v *= lambda;
    const auto report = distortion(source, PointCloud(image.ambient_dim(), std::move(scaled)));
    CHECK(report.a_hat == Approx(lambda * base.a_hat).epsilon(1e-12));
    CHECK(report.b_hat == Approx(lambda * base.b_hat).epsilon(1e-12));
    CHECK(report.argmin_pair == base.argmin_pair);
    CHECK(report.argmax_pair == base.argmax_pair);
  }
}

TEST_CASE("subsampled distortion stays inside the exact bracket", "[estimators]") {
  const auto source = sample({ModelKind::Ball, 6, 1.0}, 300, 61);
  const auto image = gaussian_project(source, 4, 62);
  const auto exact = distortion(source, image);
  const auto sub = distortion(source, image, 2000, 63);
  CHECK(sub.pairs_evaluated < exact.pairs_evaluated);
  CHECK(sub.a_hat >= exact.a_hat);
  CHECK(sub.b_hat <= exact.b_hat);
  const auto again = distortion(source, image, 2000, 63);
  CHECK(sub.a_hat == again.a_hat);
  CHECK(sub.b_hat == again.b_hat);
  // A budget covering every pair degrades to the exact scan.
  const auto all = distortion(source, image, 300 * 299 / 2, 64);
  CHECK(all.a_hat == exact.a_hat);
  CHECK(all.b_hat == exact.b_hat);
}

TEST_CASE("distortion input validation", "[estimators]") {
  const auto cloud = circle_cloud(10, 2);
  const auto small = circle_cloud(9, 2);
  CHECK_THROWS_AS(distortion(cloud, small), std::invalid_argument);
  const PointCloud coincident(2, {1.0, 1.0, 1.0, 1.0, 1.0, 1.0});
  CHECK_THROWS_AS(distortion(coincident, coincident), std::domain_error);
}

TEST_CASE("distortion golden run on a projected circle", "[estimators]") {
  // 100 circle samples isometrically embedded in R^20, then projected to m=10
  // with a fixed seed. The expected constants were produced by this pipeline
  // once and are frozen to pin down determinism across refactors.
  const auto source = embed_isometric(circle_cloud(100, 42), 20, 4242);
  const auto image = gaussian_project(source, 10, 777);
  const auto report = distortion(source, image);
  CHECK(report.a_hat == Approx(0.91468207669937052).epsilon(1e-12));
  CHECK(report.b_hat == Approx(1.2125291966169531).epsilon(1e-12));
  CHECK(report.argmin_pair == std::pair<std::size_t, std::size_t>{42, 68});
  CHECK(report.argmax_pair == std::pair<std::size_t, std::size_t>{8, 49});
}

TEST_CASE("gaussian projection basics", "[estimators]") {
  const PointCloud cloud(3, {0.0, 0.0, 0.0, 1.0, 2.0, 2.0});
  const auto image = gaussian_project(cloud, 2, 5);
  CHECK(image.ambient_dim() == 2);
  CHECK(image[0][0] == 0.0);  // zero maps to zero
  CHECK(image[0][1] == 0.0);

  // m = n = 1 is multiplication by a single N(0,1) draw.
  const PointCloud line(1, {1.0, -3.0});
  const auto mapped = gaussian_project(line, 1, 5);
  const double factor = mapped[0][0];
  CHECK(mapped[1][0] == Approx(-3.0 * factor).epsilon(1e-12));

  CHECK_THROWS_AS(gaussian_project(cloud, 0, 5), std::invalid_argument);
}

TEST_CASE("gaussian projection preserves norms in expectation", "[estimators]") {
  const PointCloud unit(4, {0.5, 0.5, 0.5, 0.5});
  double acc = 0.0;
  const int seeds = 1000;
  for (int s = 0; s < seeds; ++s) {
    const auto image = gaussian_project(unit, 3, static_cast<std::uint64_t>(s));
    double norm2 = 0.0;
    for (double v : image[0]) norm2 += v * v;
    acc += norm2;
  }
  CHECK(acc / seeds == Approx(1.0).epsilon(0.05));
}

TEST_CASE("minimal dimension search on a two-point cloud with a loose budget", "[estimators]") {
  // At m = 1 the image distance is |g| times the source distance; success
  // needs |g| in [0.1, 1.9], which has probability about 0.86. Confirm the
  // probability by direct simulation, then check the search settles on m = 1.
  KeyedRng rng{1234};
  int hits = 0;
  const int sims = 4000;
  for (int i = 0; i < sims; ++i) {
    const double g = std::abs(rng.next_gaussian());
    if (g >= 0.1 && g <= 1.9) ++hits;
  }
  CHECK(static_cast<double>(hits) / sims > 0.8);

  const auto cloud = two_points(1.0);
  CHECK(minimal_embedding_dim_search(cloud, 0.9, 200, 0.5, 31) == 1);
}

TEST_CASE("minimal dimension search returns the sentinel when nothing fits", "[estimators]") {
  // 20 well-spread points in R^10 cannot survive a 1% budget at any m <= 10.
  const auto cloud = sample({ModelKind::Ball, 10, 1.0}, 20, 6);
  CHECK(minimal_embedding_dim_search(cloud, 0.01, 2, 0.5, 7) == 11);
}

TEST_CASE("minimal dimension search is reproducible", "[estimators]") {
  const auto cloud = embed_isometric(circle_cloud(40, 15), 12, 16);
  const int a = minimal_embedding_dim_search(cloud, 0.5, 4, 0.5, 90);
  const int b = minimal_embedding_dim_search(cloud, 0.5, 4, 0.5, 90);
  CHECK(a == b);
  CHECK(a >= 1);
  CHECK(a <= 13);
  CHECK_THROWS_AS(minimal_embedding_dim_search(cloud, 0.5, 0, 0.5, 1), std::invalid_argument);
  CHECK_THROWS_AS(minimal_embedding_dim_search(cloud, 0.5, 4, 0.0, 1), std::invalid_argument);
}

TEST_CASE("point cloud csv round trip", "[estimators]") {
  const auto cloud = sample({ModelKind::Ball, 3, 2.0}, 25, 33);
  std::stringstream ss;
  cloud.save_csv(ss);
  const auto loaded = PointCloud::load_csv(ss);
  REQUIRE(loaded.size() == cloud.size());
  REQUIRE(loaded.ambient_dim() == cloud.ambient_dim());
  CHECK(loaded.flat() == cloud.flat());  // shortest round-trip formatting is exact
}

TEST_CASE("point cloud csv rejects malformed input", "[estimators]") {
  std::stringstream ragged("1.0,2.0\n3.0\n");
  CHECK_THROWS_AS(PointCloud::load_csv(ragged), std::invalid_argument);
  std::stringstream junk("1.0,abc\n");
  CHECK_THROWS_AS(PointCloud::load_csv(junk), std::invalid_argument);
  std::stringstream empty("");
  CHECK_THROWS_AS(PointCloud::load_csv(empty), std::invalid_argument);
}

TEST_CASE("point cloud validation", "[estimators]") {
  CHECK_THROWS_AS(PointCloud(2, {1.0, 2.0, 3.0}), std::invalid_argument);
  CHECK_THROWS_AS(PointCloud(2, {}), std::invalid_argument);
  CHECK_THROWS_AS(PointCloud(0, {1.0}), std::invalid_argument);
  CHECK_THROWS_AS(PointCloud(1, {std::numeric_limits<double>::quiet_NaN()}),
                  std::invalid_argument);
}
