#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace locrec {

/// Points of R^d stored contiguously, one row per point.
class PointSet {
 public:
  PointSet() = default;
  explicit PointSet(int dim);
  PointSet(int dim, std::vector<double> coords);
  PointSet(int dim, std::initializer_list<std::initializer_list<double>> points);

  [[nodiscard]] int dim() const noexcept { return dim_; }
  [[nodiscard]] std::size_t size() const noexcept { return dim_ == 0 ? 0 : coords_.size() / dim_; }
  [[nodiscard]] bool empty() const noexcept { return coords_.empty(); }

  [[nodiscard]] std::span<const double> operator[](std::size_t i) const {
    return {coords_.data() + i * dim_, static_cast<std::size_t>(dim_)};
  }
  [[nodiscard]] const double* data() const noexcept { return coords_.data(); }
  [[nodiscard]] std::span<const double> coords() const noexcept { return coords_; }

  void push_back(std::span<const double> p);
  void reserve(std::size_t n) { coords_.reserve(n * dim_); }

  /// First n points.
  [[nodiscard]] PointSet prefix(std::size_t n) const;
  /// Points at the given indices, in that order.
  [[nodiscard]] PointSet subset(std::span<const std::size_t> indices) const;

  /// Throws std::invalid_argument on a non-finite coordinate.
  void require_finite() const;

 private:
  int dim_ = 0;
  std::vector<double> coords_;
};

struct Neighbor {
  std::size_t index;
  double distance;
};

/// Immutable point cloud with an exact k-d tree for nearest-neighbor queries.
/// Duplicate points are kept.
class PointCloud {
 public:
  explicit PointCloud(PointSet points);

  [[nodiscard]] const PointSet& points() const noexcept { return points_; }
  [[nodiscard]] int dim() const noexcept { return points_.dim(); }
  [[nodiscard]] std::size_t size() const noexcept { return points_.size(); }
  [[nodiscard]] std::span<const double> operator[](std::size_t i) const { return points_[i]; }

  /// The k nearest points to z, ascending by distance, ties by lower index.
  [[nodiscard]] std::vector<Neighbor> knn(std::span<const double> z, std::size_t k) const;

 private:
  struct Node {
    std::size_t begin;  // range into order_
    std::size_t end;
    int axis;           // -1 for a leaf
    double split;
    std::size_t left;
    std::size_t right;
  };

  std::size_t build(std::size_t begin, std::size_t end);

  PointSet points_;
  std::vector<std::size_t> order_;
  std::vector<Node> nodes_;
};

/// Free-function form of PointCloud::knn.
[[nodiscard]] std::vector<Neighbor> knn(const PointCloud& cloud, std::span<const double> z,
                                        std::size_t k);

/// Half the minimum pairwise distance. Needs at least two points.
[[nodiscard]] double separation_distance(const PointSet& points);

/// Largest distance from a probe point to its nearest cloud point. This is a
/// lower bound for the fill distance over the region the probe samples and
/// converges to it as the probe is refined.
[[nodiscard]] double fill_distance(const PointCloud& cloud, const PointSet& probe);

/// Regular nx-by-ny grid on [xmin, xmax] x [ymin, ymax], x running fastest.
[[nodiscard]] PointSet grid_2d(std::size_t nx, std::size_t ny, double xmin, double xmax, double ymin,
                               double ymax);

}  // namespace locrec
