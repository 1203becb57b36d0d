#pragma once

#include <filesystem>
#include <string>

#include "lolo/localization/relocalizer.hpp"
#include "lolo/odometry/odometry.hpp"

namespace lolo {

/// Every tunable of the pipeline, loadable from a flat `key = value` text
/// file with `#` comments. Unknown keys are rejected and all values are
/// range-checked at load. The raw file text is kept for verbatim echo into
/// report headers.
struct RunConfig {
  // odometry feature extraction
  int odom_half_window = 5;
  double odom_edge_threshold = 0.1;
  double odom_planar_threshold = 0.02;
  int odom_regions_per_line = 4;
  int odom_edge_quota = 2;
  int odom_planar_quota = 4;
  double odom_occlusion_gap_m = 0.3;
  double odom_parallel_cos_max = 0.98;

  // odometry motion estimation
  int odom_max_iterations = 25;
  double odom_update_tol = 1e-6;
  double odom_correspondence_dist_m = 1.0;

  // odometry map refinement
  int map_refine_every = 10;
  int map_feature_multiplier = 10;
  int map_max_iterations = 10;
  double map_voxel_leaf_m = 0.05;
  double map_retention_radius_m = 200.0;
  double map_correspondence_dist_m = 1.0;

  // segmentation
  double seg_voxel_leaf_m = 0.1;
  double seg_cluster_radius_m = 0.2;
  int seg_min_size = 50;
  int seg_max_size = 15000;
  bool seg_drop_ground = false;
  double seg_ground_min_z_m = 0.3;

  // matching
  double gate_radius_m = 50.0;
  int knn = 3;
  double max_descriptor_dist = 0.6;
  double max_offset_diff_m = 2.0;

  // RANSAC verification
  int min_cluster_size = 3;
  double ransac_inlier_tol_m = 0.7;
  int ransac_max_iterations = 300;
  std::uint64_t rng_seed = 13;

  // localization
  int local_map_scans = 10;
  int localize_every = 10;  // scans; 0 disables localization
  int icp_max_iterations = 50;
  double icp_convergence_tol_m = 1e-4;
  double icp_max_correspondence_dist_m = 2.0;

  // scan ingestion
  int scan_rings = 32;
  double vfov_min_deg = -25.0;
  double vfov_max_deg = 15.0;
  double scan_period_s = 0.1;

  // harness hooks: per-scan odometry contamination
  double drift_bias_x_m = 0.0;
  double drift_bias_y_m = 0.0;
  double drift_bias_z_m = 0.0;

  std::string raw_text;  // verbatim file content, echoed into reports

  static RunConfig from_file(const std::filesystem::path& path);
  static RunConfig from_string(const std::string& text);

  /// Throws InvalidParameterError when any value is out of range.
  void validate() const;

  /// Canonical `key = value` rendering of the effective configuration.
  std::string to_string() const;

  OdometryConfig odometry_config() const;
  LocalizationConfig localization_config() const;
  SegmentationConfig segmentation_config() const;
  Point3 drift_bias() const { return {drift_bias_x_m, drift_bias_y_m, drift_bias_z_m}; }
};

}  // namespace lolo
