#pragma once

#include <memory>
#include <optional>

#include "lolo/core/kdtree.hpp"
#include "lolo/odometry/motion.hpp"

namespace lolo {

struct OdometryConfig {
  FeatureConfig features;
  MotionConfig motion;
  MapRefineConfig map_refine;
  int map_refine_every = 10;        // scans between map-refinement passes
  int map_feature_multiplier = 10;  // quota multiplier of the dense mapping budget
  double map_voxel_leaf = 0.05;     // m
  double map_retention_radius = 200.0;  // m around the current pose
};

enum class TrackingStatus {
  Ok,
  Degraded,  // motion was extrapolated because estimation was under-constrained
};

struct AdvanceResult {
  RigidTransform pose;  // estimate after this scan, in {W}
  TrackingStatus status = TrackingStatus::Ok;
};

/// Scan-to-scan odometry with a lower-frequency map-refinement pass.
///
/// Single-owner: exactly one execution context may advance the state;
/// corrections must be applied between scans.
class OdometryState {
 public:
  explicit OdometryState(OdometryConfig config = {});

  /// Processes one scan: feature extraction, motion estimation seeded with
  /// the previous inter-scan motion, pose integration, and on schedule a
  /// map-refinement pass. Under-constrained estimation degrades to a
  /// constant-velocity extrapolation instead of failing.
  AdvanceResult advance(const PointCloud& scan);

  /// Re-optimizes the current pose against the accumulated map with the
  /// dense feature budget, merges the scan, downsamples the map and returns
  /// the refined pose. Throws InvalidStateError when the map is empty and
  /// the state is past bootstrap.
  RigidTransform map_refine(const PointCloud& scan);

  /// Left-multiplies a relocalization update into the pose: pose <- u * pose.
  /// The odometry-internal map is left untouched; corrections live in the
  /// trajectory.
  void apply_correction(const RigidTransform& update);

  const RigidTransform& pose() const { return pose_; }
  int scan_count() const { return scan_count_; }
  const PointCloud& map_cloud() const { return map_; }
  const OdometryConfig& config() const { return config_; }

 private:
  FeatureConfig dense_feature_config() const;
  void rebuild_map(const PointCloud& registered_scan);

  OdometryConfig config_;
  RigidTransform pose_;
  RigidTransform prev_motion_;
  FeatureSet prev_features_;
  PointCloud map_;
  std::unique_ptr<SpatialIndex> map_index_;
  int scan_count_ = 0;
};

/// Spec-style free functions over the single-owner state.
inline AdvanceResult advance(OdometryState& state, const PointCloud& scan) {
  return state.advance(scan);
}
inline RigidTransform map_refine(OdometryState& state, const PointCloud& scan) {
  return state.map_refine(scan);
}
inline void apply_correction(OdometryState& state, const RigidTransform& update) {
  state.apply_correction(update);
}

}  // namespace lolo
