#pragma once

#include <utility>
#include <vector>

#include "lolo/core/types.hpp"

namespace lolo {

/// Immutable kd-tree snapshot of a point set.
///
/// Query results are exactly those a brute-force linear scan would return:
/// neighbors are reported sorted by (distance, index), and distance ties at
/// the kNN cutoff resolve toward the lower index.
class SpatialIndex {
 public:
  /// A query hit: index into the snapshot plus Euclidean distance.
  struct Neighbor {
    int index;
    double distance;
  };

  /// Builds an index over a copy of the cloud's points.
  /// Throws InvalidInputError on an empty cloud.
  explicit SpatialIndex(const PointCloud& cloud);
  explicit SpatialIndex(std::vector<Point3> points);

  std::size_t size() const { return points_.size(); }
  const Point3& point(int index) const { return points_[static_cast<std::size_t>(index)]; }

  /// The k nearest neighbors of `query` (fewer when the snapshot is smaller).
  std::vector<Neighbor> knn(const Point3& query, int k) const;

  /// All points with distance <= radius, sorted by (distance, index).
  std::vector<Neighbor> radius_search(const Point3& query, double radius) const;

 private:
  struct Node {
    int axis = -1;         // -1 marks a leaf
    double split = 0.0;
    int left = -1, right = -1;
    int begin = 0, end = 0;  // index range into order_ for leaves
  };

  int build(int begin, int end);
  void knn_recurse(int node, const Point3& query, int k,
                   std::vector<Neighbor>& heap) const;
  void radius_recurse(int node, const Point3& query, double radius_sq,
                      std::vector<Neighbor>& out) const;

  std::vector<Point3> points_;
  std::vector<int> order_;
  std::vector<Node> nodes_;
  int root_ = -1;
};

/// Spec name for index construction; identical to the constructor.
inline SpatialIndex build_index(const PointCloud& cloud) { return SpatialIndex(cloud); }

}  // namespace lolo
