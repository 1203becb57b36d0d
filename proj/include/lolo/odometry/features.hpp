#pragma once

#include <span>
#include <vector>

#include "lolo/core/types.hpp"

namespace lolo {

struct FeatureConfig {
  int half_window = 5;               // smoothness neighbors per side
  double edge_threshold = 0.1;       // c above marks a sharp edge
  double planar_threshold = 0.02;    // c below marks a planar surface
  int regions_per_line = 4;          // angular regions sharing the quotas
  int edge_quota_per_region = 2;
  int planar_quota_per_region = 4;
  double occlusion_gap = 0.3;        // m, neighbor gap marking an occlusion boundary
  double parallel_cos_max = 0.98;    // |cos(beam, tangent)| above marks a grazing surface
};

/// Edge and planar feature points of one scan (sensor frame) with their
/// smoothness values. The two sets are disjoint subsets of the scan.
struct FeatureSet {
  PointCloud edge_points;
  std::vector<double> edge_smoothness;
  PointCloud planar_points;
  std::vector<double> planar_smoothness;

  bool empty() const { return edge_points.empty() && planar_points.empty(); }
};

/// Local-surface smoothness of point i on an ordered scan line:
///
///   c = || sum_{j in S, j != i} (X_i - X_j) || / (|S| * ||X_i||)
///
/// with S the 2*half_window neighborhood of i on the same line. Throws
/// OutOfWindowError when i is closer than half_window to a line boundary.
double compute_smoothness(std::span<const Point3> scan_line, int i, int half_window);

/// Selects per ring and per angular region the highest-smoothness points as
/// edges and the lowest as planar, subject to the region quotas. Points on
/// surfaces nearly parallel to the beam and points bordering occlusions are
/// excluded, and a pick suppresses its half_window neighborhood to spread
/// the selection. Requires ring indices on a non-empty scan.
FeatureSet extract_features(const PointCloud& scan, const FeatureConfig& cfg);

/// Feature points mapped through t; smoothness values carry over.
FeatureSet transform_features(const FeatureSet& features, const RigidTransform& t);

}  // namespace lolo
