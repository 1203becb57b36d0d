#include "lolo/core/kdtree.hpp"

#include <algorithm>
#include <cmath>

namespace lolo {

namespace {

constexpr int kLeafCapacity = 16;

// Brute-force (distance, index) ordering; also the max-heap comparator that
// keeps the worst retained neighbor on top during kNN collection.
bool closer(const SpatialIndex::Neighbor& a, const SpatialIndex::Neighbor& b) {
  if (a.distance != b.distance) return a.distance < b.distance;
  return a.index < b.index;
}

}  // namespace

SpatialIndex::SpatialIndex(const PointCloud& cloud) : SpatialIndex(cloud.points) {}

SpatialIndex::SpatialIndex(std::vector<Point3> points) : points_(std::move(points)) {
  if (points_.empty()) {
    throw InvalidInputError("cannot build a spatial index over an empty cloud");
  }
  order_.resize(points_.size());
  for (std::size_t i = 0; i < order_.size(); ++i) order_[i] = static_cast<int>(i);
  nodes_.reserve(2 * points_.size() / kLeafCapacity + 2);
  root_ = build(0, static_cast<int>(order_.size()));
}

int SpatialIndex::build(int begin, int end) {
  const int id = static_cast<int>(nodes_.size());
  nodes_.emplace_back();
  if (end - begin <= kLeafCapacity) {
    nodes_[id].begin = begin;
    nodes_[id].end = end;
    return id;
  }

  // Split on the widest dimension at the median.
  Point3 lo = points_[static_cast<std::size_t>(order_[begin])];
  Point3 hi = lo;
  for (int i = begin + 1; i < end; ++i) {
    const Point3& p = points_[static_cast<std::size_t>(order_[i])];
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  int axis = 0;
  (hi - lo).maxCoeff(&axis);

  const int mid = begin + (end - begin) / 2;
  std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                   [&](int a, int b) {
                     return points_[static_cast<std::size_t>(a)][axis] <
                            points_[static_cast<std::size_t>(b)][axis];
                   });

  nodes_[id].axis = axis;
  nodes_[id].split = points_[static_cast<std::size_t>(order_[mid])][axis];
  const int left = build(begin, mid);
  const int right = build(mid, end);
  nodes_[id].left = left;
  nodes_[id].right = right;
  return id;
}

std::vector<SpatialIndex::Neighbor> SpatialIndex::knn(const Point3& query, int k) const {
  std::vector<Neighbor> heap;
  if (k <= 0) return heap;
  heap.reserve(static_cast<std::size_t>(k) + 1);
  knn_recurse(root_, query, k, heap);
  std::sort(heap.begin(), heap.end(), closer);
  return heap;
}

void SpatialIndex::knn_recurse(int node, const Point3& query, int k,
                               std::vector<Neighbor>& heap) const {
  const Node& n = nodes_[static_cast<std::size_t>(node)];
  if (n.axis < 0) {
    for (int i = n.begin; i < n.end; ++i) {
      const int idx = order_[static_cast<std::size_t>(i)];
      const Neighbor cand{idx, (points_[static_cast<std::size_t>(idx)] - query).norm()};
      if (static_cast<int>(heap.size()) < k) {
        heap.push_back(cand);
        std::push_heap(heap.begin(), heap.end(), closer);
      } else if (closer(cand, heap.front())) {
        std::pop_heap(heap.begin(), heap.end(), closer);
        heap.back() = cand;
        std::push_heap(heap.begin(), heap.end(), closer);
      }
    }
    return;
  }

  const double delta = query[n.axis] - n.split;
  const int near = delta < 0.0 ? n.left : n.right;
  const int far = delta < 0.0 ? n.right : n.left;
  knn_recurse(near, query, k, heap);
  // The far side may still hold an equally distant, lower-index point, so
  // only prune on a strict distance excess.
  if (static_cast<int>(heap.size()) < k || std::abs(delta) <= heap.front().distance) {
    knn_recurse(far, query, k, heap);
  }
}

std::vector<SpatialIndex::Neighbor> SpatialIndex::radius_search(const Point3& query,
                                                                double radius) const {
  std::vector<Neighbor> out;
  if (radius < 0.0) return out;
  radius_recurse(root_, query, radius * radius, out);
  std::sort(out.begin(), out.end(), closer);
  return out;
}

void SpatialIndex::radius_recurse(int node, const Point3& query, double radius_sq,
                                  std::vector<Neighbor>& out) const {
  const Node& n = nodes_[static_cast<std::size_t>(node)];
  if (n.axis < 0) {
    for (int i = n.begin; i < n.end; ++i) {
      const int idx = order_[static_cast<std::size_t>(i)];
      const double d2 = (points_[static_cast<std::size_t>(idx)] - query).squaredNorm();
      if (d2 <= radius_sq) {
        out.push_back(Neighbor{idx, std::sqrt(d2)});
      }
    }
    return;
  }
  const double delta = query[n.axis] - n.split;
  if (delta * delta <= radius_sq) {
    radius_recurse(n.left, query, radius_sq, out);
    radius_recurse(n.right, query, radius_sq, out);
  } else if (delta < 0.0) {
    radius_recurse(n.left, query, radius_sq, out);
  } else {
    radius_recurse(n.right, query, radius_sq, out);
  }
}

}  // namespace lolo
