#include "locrec/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <stdexcept>
#include <utility>

namespace locrec {

namespace {

constexpr std::size_t kLeafSize = 16;

double squared_distance(const double* a, const double* b, int dim) {
  double s = 0.0;
  for (int i = 0; i < dim; ++i) {
    const double diff = a[i] - b[i];
    s += diff * diff;
  }
  return s;
}

// Lexicographic on (squared distance, index): the heap top is the worst kept.
struct Candidate {
  double dist2;
  std::size_t index;
  bool operator<(const Candidate& o) const {
    return dist2 < o.dist2 || (dist2 == o.dist2 && index < o.index);
  }
};

}  // namespace

PointSet::PointSet(int dim) : dim_(dim) {
  if (dim < 1) throw std::invalid_argument("PointSet: dimension must be >= 1");
}

PointSet::PointSet(int dim, std::vector<double> coords) : dim_(dim), coords_(std::move(coords)) {
  if (dim < 1) throw std::invalid_argument("PointSet: dimension must be >= 1");
  if (coords_.size() % static_cast<std::size_t>(dim) != 0)
    throw std::invalid_argument("PointSet: coordinate count is not a multiple of the dimension");
}

PointSet::PointSet(int dim, std::initializer_list<std::initializer_list<double>> points)
    : PointSet(dim) {
  for (const auto& p : points) push_back(std::span<const double>(p.begin(), p.size()));
}

void PointSet::push_back(std::span<const double> p) {
  if (p.size() != static_cast<std::size_t>(dim_))
    throw std::invalid_argument("PointSet: point dimension mismatch");
  coords_.insert(coords_.end(), p.begin(), p.end());
}

PointSet PointSet::prefix(std::size_t n) const {
  if (n > size()) throw std::invalid_argument("PointSet: prefix longer than the set");
  return PointSet(dim_, std::vector<double>(coords_.begin(), coords_.begin() + n * dim_));
}

PointSet PointSet::subset(std::span<const std::size_t> indices) const {
  PointSet out(dim_);
  out.reserve(indices.size());
  for (std::size_t i : indices) {
    if (i >= size()) throw std::out_of_range("PointSet: subset index out of range");
    out.push_back((*this)[i]);
  }
  return out;
}

void PointSet::require_finite() const {
  for (double v : coords_) {
    if (!std::isfinite(v)) throw std::invalid_argument("PointSet: non-finite coordinate");
  }
}

PointCloud::PointCloud(PointSet points) : points_(std::move(points)) {
  if (points_.empty()) throw std::invalid_argument("PointCloud: needs at least one point");
  points_.require_finite();
  order_.resize(points_.size());
  std::iota(order_.begin(), order_.end(), std::size_t{0});
  nodes_.reserve(2 * points_.size() / kLeafSize + 2);
  build(0, order_.size());
}

std::size_t PointCloud::build(std::size_t begin, std::size_t end) {
  const std::size_t id = nodes_.size();
  nodes_.push_back({begin, end, -1, 0.0, 0, 0});
  if (end - begin <= kLeafSize) return id;

  const int dim = points_.dim();
  int axis = 0;
  double best_spread = -1.0;
  for (int a = 0; a < dim; ++a) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (std::size_t i = begin; i < end; ++i) {
      const double v = points_[order_[i]][a];
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    if (hi - lo > best_spread) {
      best_spread = hi - lo;
      axis = a;
    }
  }
  // All points coincide: splitting cannot separate them.
  if (best_spread <= 0.0) return id;

  const std::size_t mid = begin + (end - begin) / 2;
  std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                   [&](std::size_t a, std::size_t b) { return points_[a][axis] < points_[b][axis]; });
  const double split = points_[order_[mid]][axis];
  const std::size_t left = build(begin, mid);
  const std::size_t right = build(mid, end);
  nodes_[id].axis = axis;
  nodes_[id].split = split;
  nodes_[id].left = left;
  nodes_[id].right = right;
  return id;
}

std::vector<Neighbor> PointCloud::knn(std::span<const double> z, std::size_t k) const {
  const int dim = points_.dim();
  if (z.size() != static_cast<std::size_t>(dim))
    throw std::invalid_argument("knn: query dimension does not match the cloud");
  if (k < 1 || k > size()) throw std::invalid_argument("knn: k must satisfy 1 <= k <= N");
  for (double v : z) {
    if (!std::isfinite(v)) throw std::invalid_argument("knn: non-finite query coordinate");
  }

  std::priority_queue<Candidate> heap;
  auto visit = [&](auto&& self, std::size_t node_id) -> void {
    const Node& node = nodes_[node_id];
    if (node.axis < 0) {
      for (std::size_t i = node.begin; i < node.end; ++i) {
        const std::size_t idx = order_[i];
        const Candidate c{squared_distance(z.data(), points_[idx].data(), dim), idx};
        if (heap.size() < k) {
          heap.push(c);
        } else if (c < heap.top()) {
          heap.pop();
          heap.push(c);
        }
      }
      return;
    }
    const double delta = z[node.axis] - node.split;
    const std::size_t near = delta < 0.0 ? node.left : node.right;
    const std::size_t far = delta < 0.0 ? node.right : node.left;
    self(self, near);
    // Equal distances must still be explored so that index tie-breaking is exact.
    if (heap.size() < k || delta * delta <= heap.top().dist2) self(self, far);
  };
  visit(visit, 0);

  std::vector<Neighbor> out(heap.size());
  for (std::size_t i = out.size(); i-- > 0;) {
    out[i] = {heap.top().index, std::sqrt(heap.top().dist2)};
    heap.pop();
  }
  return out;
}

std::vector<Neighbor> knn(const PointCloud& cloud, std::span<const double> z, std::size_t k) {
  return cloud.knn(z, k);
}

double separation_distance(const PointSet& points) {
  if (points.size() < 2) throw std::invalid_argument("separation_distance: needs at least two points");
  const PointCloud cloud(points);
  double min_dist = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < points.size(); ++i) {
    // The query point itself is one of the two nearest; the other is its closest partner.
    const auto nn = cloud.knn(points[i], 2);
    const double d = nn[0].index == i ? nn[1].distance : nn[0].distance;
    min_dist = std::min(min_dist, d);
  }
  return 0.5 * min_dist;
}

double fill_distance(const PointCloud& cloud, const PointSet& probe) {
  if (probe.empty()) throw std::invalid_argument("fill_distance: probe set is empty");
  if (probe.dim() != cloud.dim())
    throw std::invalid_argument("fill_distance: probe dimension does not match the cloud");
  double h = 0.0;
  for (std::size_t i = 0; i < probe.size(); ++i) h = std::max(h, cloud.knn(probe[i], 1)[0].distance);
  return h;
}

PointSet grid_2d(std::size_t nx, std::size_t ny, double xmin, double xmax, double ymin, double ymax) {
  if (nx < 1 || ny < 1) throw std::invalid_argument("grid: nx and ny must be >= 1");
  if (!(xmax >= xmin) || !(ymax >= ymin)) throw std::invalid_argument("grid: bounds out of order");
  PointSet g(2);
  g.reserve(nx * ny);
  auto coord = [](double lo, double hi, std::size_t i, std::size_t n) {
    return n == 1 ? 0.5 * (lo + hi) : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  };
  for (std::size_t j = 0; j < ny; ++j) {
    for (std::size_t i = 0; i < nx; ++i) {
      const double p[2] = {coord(xmin, xmax, i, nx), coord(ymin, ymax, j, ny)};
      g.push_back(p);
    }
  }
  return g;
}

}  // namespace locrec
