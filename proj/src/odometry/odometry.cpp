#include "lolo/odometry/odometry.hpp"

#include "lolo/core/voxel_grid.hpp"

namespace lolo {

OdometryState::OdometryState(OdometryConfig config) : config_(std::move(config)) {}

FeatureConfig OdometryState::dense_feature_config() const {
  FeatureConfig dense = config_.features;
  dense.edge_quota_per_region *= config_.map_feature_multiplier;
  dense.planar_quota_per_region *= config_.map_feature_multiplier;
  return dense;
}

void OdometryState::rebuild_map(const PointCloud& registered_scan) {
  map_.append(registered_scan);
  map_ = voxel_downsample(map_, VoxelGridSpec{config_.map_voxel_leaf, Point3::Zero()});

  // Bound memory: retain only points near the current pose.
  const double radius_sq = config_.map_retention_radius * config_.map_retention_radius;
  PointCloud cropped;
  cropped.reserve(map_.size());
  for (const Point3& p : map_.points) {
    if ((p - pose_.translation()).squaredNorm() <= radius_sq) cropped.add(p);
  }
  map_ = std::move(cropped);
  map_index_ = map_.empty() ? nullptr : std::make_unique<SpatialIndex>(map_);
}

RigidTransform OdometryState::map_refine(const PointCloud& scan) {
  PointCloud registered;
  if (map_.empty()) {
    if (scan_count_ > 1) {
      throw InvalidStateError("map_refine: empty map past bootstrap");
    }
    // Bootstrap: the first scan becomes the map, pose unchanged.
    registered = transform_cloud(voxel_downsample(scan, VoxelGridSpec{config_.map_voxel_leaf,
                                                                      Point3::Zero()}),
                                 pose_);
    rebuild_map(registered);
    return pose_;
  }

  const FeatureSet dense = extract_features(scan, dense_feature_config());
  if (!dense.empty()) {
    pose_ = refine_pose_against_map(dense, pose_, *map_index_, config_.map_refine);
  }

  registered = transform_cloud(voxel_downsample(scan, VoxelGridSpec{config_.map_voxel_leaf,
                                                                    Point3::Zero()}),
                               pose_);
  rebuild_map(registered);
  return pose_;
}

AdvanceResult OdometryState::advance(const PointCloud& scan) {
  scan.validate();
  FeatureSet features = extract_features(scan, config_.features);
  AdvanceResult result;

  if (scan_count_ == 0) {
    ++scan_count_;
    prev_features_ = std::move(features);
    prev_motion_ = RigidTransform::identity();
    map_refine(scan);  // bootstrap
    result.pose = pose_;
    return result;
  }

  RigidTransform motion;
  try {
    motion = estimate_motion(prev_features_, features, prev_motion_, config_.motion);
  } catch (const UnderConstrainedError&) {
    motion = prev_motion_;  // constant-velocity extrapolation
    result.status = TrackingStatus::Degraded;
  }
  pose_ = pose_ * motion;
  prev_motion_ = motion;
  prev_features_ = std::move(features);

  ++scan_count_;
  if (config_.map_refine_every > 0 && (scan_count_ - 1) % config_.map_refine_every == 0) {
    map_refine(scan);
  }

  result.pose = pose_;
  return result;
}

void OdometryState::apply_correction(const RigidTransform& update) {
  pose_ = update * pose_;
}

}  // namespace lolo
