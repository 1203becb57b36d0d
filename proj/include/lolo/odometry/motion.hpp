#pragma once

#include "lolo/core/kdtree.hpp"
#include "lolo/odometry/features.hpp"

namespace lolo {

struct MotionConfig {
  int max_iterations = 25;
  double update_tol = 1e-6;              // damped GN parameter-update norm
  double max_correspondence_dist = 1.0;  // m
  double max_residual = 1.0;             // m, trims gross mismatches
  double edge_threshold = 0.1;           // correspondence validity re-check
  double planar_threshold = 0.02;
  double min_pair_separation = 1e-3;     // m, line endpoints must be distinct
};

/// Scan-to-scan rigid motion from feature correspondences: edge points are
/// matched to 2-point lines and planar points to 3-point patches of the
/// previous feature set, minimizing point-to-line plus point-to-plane
/// distances by damped Gauss-Newton. The returned transform maps
/// current-frame coordinates into the previous frame.
///
/// Throws UnderConstrainedError when fewer than 6 valid correspondences
/// exist at the initial association.
RigidTransform estimate_motion(const FeatureSet& prev, const FeatureSet& curr,
                               const RigidTransform& initial_guess, const MotionConfig& cfg);

struct MapRefineConfig {
  int max_iterations = 10;
  double update_tol = 1e-6;
  double max_correspondence_dist = 1.0;  // m
  double max_residual = 1.0;             // m
  int neighbors = 5;                     // map points fitted per feature
  double line_ratio = 3.0;               // eigenvalue dominance for a valid line fit
  double plane_fit_tol = 0.1;            // m, max neighbor deviation for a valid plane fit
};

/// Re-optimizes a world pose against an accumulated map: each (sensor-frame)
/// feature point gathers its map neighbors, which are fitted as a line
/// (edges) or plane (planar points); the pose correction is solved in the
/// sensor-local tangent for conditioning. Returns the refined pose; returns
/// the initial pose unchanged when no usable correspondences exist.
RigidTransform refine_pose_against_map(const FeatureSet& features, const RigidTransform& pose,
                                       const SpatialIndex& map_index, const MapRefineConfig& cfg);

}  // namespace lolo
