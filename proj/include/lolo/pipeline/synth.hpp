#pragma once

#include <optional>
#include <vector>

#include "lolo/core/types.hpp"
#include "lolo/pipeline/trajectory.hpp"

namespace lolo {

/// Rotating-lidar sampling model. Rings sweep elevations from vfov_min to
/// vfov_max; each ring fires azimuth_steps rays counterclockwise from -pi.
struct LidarModel {
  int rings = 32;
  double vfov_min_deg = -25.0;
  double vfov_max_deg = 15.0;
  int azimuth_steps = 900;
  double max_range = 40.0;  // m
  double min_range = 0.5;   // m
};

/// Analytic scene primitives. Objects rest in the world frame; scans and
/// map samples are generated from the same surfaces.
struct BoxObject {
  RigidTransform pose;  // box center
  Point3 half_extents;
};

struct CylinderObject {
  Point3 base_center;  // axis along +z
  double radius;
  double height;
};

struct RectObject {
  Point3 origin;  // one corner
  Point3 edge_u;  // spans the rectangle: origin + s*edge_u + t*edge_v
  Point3 edge_v;
};

struct Scene {
  std::vector<BoxObject> boxes;
  std::vector<CylinderObject> cylinders;
  std::vector<RectObject> rects;
};

/// Nearest ray-surface intersection distance in (min_range, max_range],
/// or nullopt when the ray escapes.
std::optional<double> ray_hit(const Scene& scene, const Point3& origin, const Point3& dir,
                              double min_range, double max_range);

/// Simulates one scan from `sensor_pose`: rays in ring-major, azimuth
/// (acquisition) order; points are returned in the sensor frame with ring
/// indices attached.
PointCloud raycast_scan(const Scene& scene, const RigidTransform& sensor_pose,
                        const LidarModel& lidar);

/// Dense surface sampling of every primitive at roughly `spacing`, with
/// deterministic seed-driven jitter. Used to build target maps.
PointCloud sample_surfaces(const Scene& scene, double spacing, std::uint64_t seed);

struct SynthParams {
  std::uint64_t seed = 1;
  int object_count = 20;
  double area = 3600.0;  // m^2, square footprint
  int scan_count = 100;
  double scan_spacing = 0.7;   // m between consecutive sensor positions
  double sensor_height = 1.8;  // m
  double scan_period = 0.1;    // s between scans
  double map_sample_spacing = 0.07;
  Point3 drift_bias = Point3::Zero();  // per-scan contamination of the odometry-truth
  LidarModel lidar;
};

struct SynthScene {
  Scene world;
  PointCloud target_map;                        // ground-free, in {W}
  std::vector<PointCloud> scans;                // sensor frame, ring-indexed
  std::vector<TrajectoryNode> ground_truth;     // true sensor poses
  std::vector<TrajectoryNode> biased_odometry;  // ground truth contaminated by drift_bias
};

/// Deterministic synthetic world: scattered box/cylinder/plane objects, a
/// smooth drive-through trajectory and range-limited scans of the visible
/// surfaces (partially observed objects arise naturally near the path).
/// Throws InvalidParameterError for a non-positive object or scan count.
SynthScene synth_scene(const SynthParams& params);

}  // namespace lolo
