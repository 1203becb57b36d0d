#pragma once

#include <cstdint>
#include <vector>

#include "lolo/core/types.hpp"
#include "lolo/segmentation/descriptor.hpp"

namespace lolo {

struct SegmentationConfig {
  double voxel_leaf = 0.1;       // m
  double cluster_radius = 0.2;   // m, single-linkage connection distance
  int min_segment_size = 50;     // points, after voxelization
  int max_segment_size = 15000;
  bool drop_ground = false;      // for real data; synthetic clouds are ground-free
  double ground_min_z = 0.3;     // m, points below are dropped when drop_ground
};

/// A clustered subset of a cloud, in the frame of its source map.
struct Segment {
  std::uint64_t id = 0;
  PointCloud points;
  Point3 centroid = Point3::Zero();
  Descriptor descriptor = Descriptor::Zero();
};

/// Voxel-downsamples the cloud, then extracts connected components under
/// single-linkage Euclidean clustering (points connect within
/// cluster_radius). Components with size in [min, max] become clusters,
/// ordered and numbered by their lowest member index, so identical input
/// and config always produce identical clusters.
std::vector<PointCloud> extract_clusters(const PointCloud& cloud, const SegmentationConfig& cfg);

/// extract_clusters + centroid + describe_eigen per cluster; ids are unique
/// and ascending. Clusters whose covariance is degenerate are skipped.
std::vector<Segment> segment_cloud(const PointCloud& cloud, const SegmentationConfig& cfg);

/// Builds Segment records (ids 0..n-1 in cluster order) from ready clusters.
std::vector<Segment> make_segments(std::vector<PointCloud> clusters);

}  // namespace lolo
