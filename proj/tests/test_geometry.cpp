#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "locrec/experiments.hpp"
#include "locrec/geometry.hpp"
#include "locrec/point_io.hpp"

using namespace locrec;

namespace {

std::vector<Neighbor> brute_knn(const PointSet& pts, std::span<const double> z, std::size_t k) {
  std::vector<std::pair<double, std::size_t>> all;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    double s = 0.0;
    for (int a = 0; a < pts.dim(); ++a) s += (pts[i][a] - z[a]) * (pts[i][a] - z[a]);
    all.emplace_back(s, i);
  }
  std::sort(all.begin(), all.end());
  std::vector<Neighbor> out;
  for (std::size_t i = 0; i < k; ++i) out.push_back({all[i].second, std::sqrt(all[i].first)});
  return out;
}

double brute_separation(const PointSet& pts) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j)
      best = std::min(best, std::hypot(pts[i][0] - pts[j][0], pts[i][1] - pts[j][1]));
  return 0.5 * best;
}

double brute_fill(const PointSet& cloud, const PointSet& probe) {
  double h = 0.0;
  for (std::size_t i = 0; i < probe.size(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < cloud.size(); ++j)
      best = std::min(best, std::hypot(probe[i][0] - cloud[j][0], probe[i][1] - cloud[j][1]));
    h = std::max(h, best);
  }
  return h;
}

}  // namespace

TEST_CASE("knn examples") {
  const PointCloud single(PointSet(2, {{0.0, 0.0}}));
  const std::vector<double> z{1.0, 1.0};
  const auto nn = single.knn(z, 1);
  REQUIRE(nn.size() == 1);
  CHECK(nn[0].index == 0);
  CHECK(nn[0].distance == doctest::Approx(std::sqrt(2.0)));

  const PointCloud grid(grid_2d(3, 3, 0.0, 2.0, 0.0, 2.0));
  const std::vector<double> origin{0.0, 0.0};
  const auto self = grid.knn(origin, 1);
  CHECK(self[0].index == 0);
  CHECK(self[0].distance == 0.0);
}

TEST_CASE("knn matches a brute-force scan") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    const PointSet pts = random_cloud(100 + 37 * trial, 2, 100 + trial);
    const PointCloud cloud(pts);
    const std::vector<double> z{u(rng), u(rng)};
    for (std::size_t k : {1UL, 7UL, 30UL, pts.size()}) {
      const auto got = cloud.knn(z, k);
      const auto want = brute_knn(pts, z, k);
      REQUIRE(got.size() == k);
      for (std::size_t i = 0; i < k; ++i) {
        CHECK(got[i].index == want[i].index);
        CHECK(got[i].distance == want[i].distance);
        if (i > 0) CHECK(got[i].distance >= got[i - 1].distance);
      }
    }
  }
}

TEST_CASE("knn breaks ties by lower index and keeps duplicates") {
  // Regular grid: many equidistant neighbors of the centre.
  const PointSet g = grid_2d(41, 41, -1.0, 1.0, -1.0, 1.0);
  const PointCloud cloud(g);
  const std::vector<double> z{0.025, 0.025};
  for (std::size_t k : {4UL, 9UL, 16UL, 40UL}) {
    const auto got = cloud.knn(z, k);
    const auto want = brute_knn(g, z, k);
    for (std::size_t i = 0; i < k; ++i) CHECK(got[i].index == want[i].index);
  }

  PointSet dup(2, {{0.5, 0.5}, {0.1, 0.1}, {0.5, 0.5}, {0.5, 0.5}});
  const PointCloud dcloud(dup);
  const std::vector<double> q{0.5, 0.5};
  const auto nn = dcloud.knn(q, 3);
  CHECK(nn[0].index == 0);
  CHECK(nn[1].index == 2);
  CHECK(nn[2].index == 3);
}

TEST_CASE("knn argument errors") {
  const PointCloud cloud(random_cloud(10, 2, 1));
  const std::vector<double> z{0.0, 0.0};
  const std::vector<double> z3{0.0, 0.0, 0.0};
  CHECK_THROWS_AS((void)cloud.knn(z, 11), std::invalid_argument);
  CHECK_THROWS_AS((void)cloud.knn(z, 0), std::invalid_argument);
  CHECK_THROWS_AS((void)cloud.knn(z3, 1), std::invalid_argument);
  CHECK_THROWS_AS(PointCloud(PointSet(2)), std::invalid_argument);
}

TEST_CASE("separation distance") {
  CHECK(separation_distance(PointSet(2, {{0.0, 0.0}, {0.2, 0.0}})) == doctest::Approx(0.1));
  CHECK(separation_distance(grid_2d(5, 4, 0.0, 4.0, 0.0, 3.0)) == doctest::Approx(0.5));
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const PointSet pts = random_cloud(50, 2, seed);
    CHECK(separation_distance(pts) == doctest::Approx(brute_separation(pts)).epsilon(1e-14));
  }
  CHECK(separation_distance(PointSet(2, {{0.3, 0.3}, {0.3, 0.3}, {0.9, 0.1}})) == 0.0);
  CHECK_THROWS_AS((void)separation_distance(PointSet(2, {{0.0, 0.0}})), std::invalid_argument);
}

TEST_CASE("fill distance") {
  const PointCloud origin(PointSet(2, {{0.0, 0.0}}));
  const PointSet corners(2, {{-1.0, -1.0}, {1.0, -1.0}, {-1.0, 1.0}, {1.0, 1.0}});
  CHECK(fill_distance(origin, corners) == doctest::Approx(std::sqrt(2.0)));

  const PointSet pts = random_cloud(400, 2, 5);
  CHECK(fill_distance(PointCloud(pts), pts) == 0.0);

  const PointSet probe = grid_2d(101, 101, -1.0, 1.0, -1.0, 1.0);
  CHECK(fill_distance(PointCloud(pts), probe) == doctest::Approx(brute_fill(pts, probe)).epsilon(1e-14));

  CHECK_THROWS_AS((void)fill_distance(origin, PointSet(2)), std::invalid_argument);
}

TEST_CASE("fill and separation are monotone under enlargement") {
  const PointSet all = random_cloud(800, 2, 9);
  const PointSet probe = grid_2d(41, 41, -1.0, 1.0, -1.0, 1.0);
  double prev_fill = std::numeric_limits<double>::infinity();
  double prev_sep = std::numeric_limits<double>::infinity();
  for (std::size_t n = 2; n <= all.size(); n += 17) {
    const PointSet prefix = all.prefix(n);
    const double h = fill_distance(PointCloud(prefix), probe);
    const double s = separation_distance(prefix);
    CHECK(h <= prev_fill);
    CHECK(s <= prev_sep);
    prev_fill = h;
    prev_sep = s;
  }
}

TEST_CASE("point file parsing") {
  std::istringstream in("# sites\n0.5, 0.25, 3\n-1 1 2.5\n\n  # indented comment\n0,0,1e-3\n");
  const PointData data = read_points(in, 2);
  REQUIRE(data.points.size() == 3);
  CHECK(data.points[1][0] == -1.0);
  CHECK(data.points[1][1] == 1.0);
  REQUIRE(data.has_values());
  CHECK(data.values[2] == 1e-3);

  std::istringstream plain("1 2\n3,4\n");
  const PointData p = read_points(plain, 2);
  CHECK(p.points.size() == 2);
  CHECK_FALSE(p.has_values());

  std::istringstream mixed("1 2 3\n3 4\n");
  CHECK_THROWS_AS((void)read_points(mixed, 2), std::runtime_error);
  std::istringstream wrong("1 2 3 4\n");
  CHECK_THROWS_AS((void)read_points(wrong, 2), std::runtime_error);
  std::istringstream garbage("1 x\n");
  CHECK_THROWS_AS((void)read_points(garbage, 2), std::runtime_error);
  CHECK_THROWS((void)read_point_file("/nonexistent/points.txt", 2));
}
