#include "lolo/pipeline/synth.hpp"

#include <algorithm>
#include <cmath>

#include "lolo/core/rng.hpp"

namespace lolo {

namespace {

constexpr double kEps = 1e-12;

std::optional<double> hit_box(const BoxObject& box, const Point3& origin, const Point3& dir) {
  const RigidTransform inv = box.pose.inverse();
  const Point3 o = inv * origin;
  const Point3 d = inv.rotation() * dir;
  double tmin = -std::numeric_limits<double>::infinity();
  double tmax = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 3; ++i) {
    if (std::abs(d(i)) < kEps) {
      if (std::abs(o(i)) > box.half_extents(i)) return std::nullopt;
      continue;
    }
    double t1 = (-box.half_extents(i) - o(i)) / d(i);
    double t2 = (box.half_extents(i) - o(i)) / d(i);
    if (t1 > t2) std::swap(t1, t2);
    tmin = std::max(tmin, t1);
    tmax = std::min(tmax, t2);
    if (tmin > tmax) return std::nullopt;
  }
  if (tmin <= 0.0) return std::nullopt;  // behind the sensor or sensor inside
  return tmin;
}

std::optional<double> hit_cylinder(const CylinderObject& cyl, const Point3& origin,
                                   const Point3& dir) {
  double best = std::numeric_limits<double>::infinity();
  const double ox = origin.x() - cyl.base_center.x();
  const double oy = origin.y() - cyl.base_center.y();
  const double oz = origin.z() - cyl.base_center.z();

  // Lateral surface.
  const double a = dir.x() * dir.x() + dir.y() * dir.y();
  if (a > kEps) {
    const double b = 2.0 * (ox * dir.x() + oy * dir.y());
    const double c = ox * ox + oy * oy - cyl.radius * cyl.radius;
    const double disc = b * b - 4.0 * a * c;
    if (disc >= 0.0) {
      const double sq = std::sqrt(disc);
      for (double t : {(-b - sq) / (2.0 * a), (-b + sq) / (2.0 * a)}) {
        if (t <= 0.0 || t >= best) continue;
        const double z = oz + t * dir.z();
        if (z >= 0.0 && z <= cyl.height) best = t;
      }
    }
  }

  // End caps.
  if (std::abs(dir.z()) > kEps) {
    for (double zcap : {0.0, cyl.height}) {
      const double t = (zcap - oz) / dir.z();
      if (t <= 0.0 || t >= best) continue;
      const double px = ox + t * dir.x();
      const double py = oy + t * dir.y();
      if (px * px + py * py <= cyl.radius * cyl.radius) best = t;
    }
  }

  if (!std::isfinite(best)) return std::nullopt;
  return best;
}

std::optional<double> hit_rect(const RectObject& rect, const Point3& origin, const Point3& dir) {
  const Point3 normal = rect.edge_u.cross(rect.edge_v);
  const double denom = normal.dot(dir);
  if (std::abs(denom) < kEps) return std::nullopt;
  const double t = normal.dot(rect.origin - origin) / denom;
  if (t <= 0.0) return std::nullopt;
  const Point3 rel = origin + t * dir - rect.origin;
  const double s = rel.dot(rect.edge_u) / rect.edge_u.squaredNorm();
  const double w = rel.dot(rect.edge_v) / rect.edge_v.squaredNorm();
  if (s < 0.0 || s > 1.0 || w < 0.0 || w > 1.0) return std::nullopt;
  return t;
}

// In-plane jittered grid over a parallelogram patch.
void sample_patch(PointCloud& out, const Point3& origin, const Point3& u, const Point3& v,
                  double spacing, SplitMix64& rng) {
  const int nu = std::max(1, static_cast<int>(std::lround(u.norm() / spacing)));
  const int nv = std::max(1, static_cast<int>(std::lround(v.norm() / spacing)));
  for (int i = 0; i < nu; ++i) {
    for (int j = 0; j < nv; ++j) {
      const double su = (i + 0.5 + rng.range(-0.25, 0.25)) / nu;
      const double sv = (j + 0.5 + rng.range(-0.25, 0.25)) / nv;
      out.add(origin + su * u + sv * v);
    }
  }
}

}  // namespace

std::optional<double> ray_hit(const Scene& scene, const Point3& origin, const Point3& dir,
                              double min_range, double max_range) {
  double best = std::numeric_limits<double>::infinity();
  auto consider = [&](const std::optional<double>& t) {
    if (t && *t > min_range && *t <= max_range && *t < best) best = *t;
  };
  for (const auto& box : scene.boxes) consider(hit_box(box, origin, dir));
  for (const auto& cyl : scene.cylinders) consider(hit_cylinder(cyl, origin, dir));
  for (const auto& rect : scene.rects) consider(hit_rect(rect, origin, dir));
  if (!std::isfinite(best)) return std::nullopt;
  return best;
}

PointCloud raycast_scan(const Scene& scene, const RigidTransform& sensor_pose,
                        const LidarModel& lidar) {
  PointCloud scan;
  const Point3 origin = sensor_pose.translation();
  const double vmin = lidar.vfov_min_deg * M_PI / 180.0;
  const double vmax = lidar.vfov_max_deg * M_PI / 180.0;
  for (int ring = 0; ring < lidar.rings; ++ring) {
    const double elev =
        lidar.rings > 1 ? vmin + (vmax - vmin) * ring / (lidar.rings - 1) : 0.5 * (vmin + vmax);
    const double ce = std::cos(elev), se = std::sin(elev);
    for (int step = 0; step < lidar.azimuth_steps; ++step) {
      const double az = -M_PI + 2.0 * M_PI * step / lidar.azimuth_steps;
      const Point3 dir_sensor(ce * std::cos(az), ce * std::sin(az), se);
      const Point3 dir_world = sensor_pose.rotation() * dir_sensor;
      if (const auto t = ray_hit(scene, origin, dir_world, lidar.min_range, lidar.max_range)) {
        scan.add(*t * dir_sensor, ring);
      }
    }
  }
  return scan;
}

PointCloud sample_surfaces(const Scene& scene, double spacing, std::uint64_t seed) {
  if (!(spacing > 0.0)) {
    throw InvalidParameterError("sample_surfaces: spacing must be strictly positive");
  }
  SplitMix64 rng(seed);
  PointCloud map;

  for (const auto& box : scene.boxes) {
    const Point3& h = box.half_extents;
    const Eigen::Matrix3d& r = box.pose.rotation();
    const Point3 ax = r.col(0), ay = r.col(1), az = r.col(2);
    const Point3 c = box.pose.translation();
    // Bottom faces of grounded boxes are unobservable; skip them.
    const bool grounded = c.z() - h.z() < 0.05;
    struct Face {
      Point3 center, u, v;
      bool skip;
    };
    const Face faces[6] = {
        {c + h.x() * ax, 2 * h.y() * ay, 2 * h.z() * az, false},
        {c - h.x() * ax, 2 * h.y() * ay, 2 * h.z() * az, false},
        {c + h.y() * ay, 2 * h.x() * ax, 2 * h.z() * az, false},
        {c - h.y() * ay, 2 * h.x() * ax, 2 * h.z() * az, false},
        {c + h.z() * az, 2 * h.x() * ax, 2 * h.y() * ay, false},
        {c - h.z() * az, 2 * h.x() * ax, 2 * h.y() * ay, grounded},
    };
    for (const Face& f : faces) {
      if (f.skip) continue;
      sample_patch(map, f.center - 0.5 * f.u - 0.5 * f.v, f.u, f.v, spacing, rng);
    }
  }

  for (const auto& cyl : scene.cylinders) {
    const int ntheta = std::max(3, static_cast<int>(std::lround(2.0 * M_PI * cyl.radius / spacing)));
    const int nz = std::max(1, static_cast<int>(std::lround(cyl.height / spacing)));
    for (int i = 0; i < ntheta; ++i) {
      for (int j = 0; j < nz; ++j) {
        const double theta = 2.0 * M_PI * (i + 0.5 + rng.range(-0.25, 0.25)) / ntheta;
        const double z = cyl.height * (j + 0.5 + rng.range(-0.25, 0.25)) / nz;
        map.add(cyl.base_center +
                Point3(cyl.radius * std::cos(theta), cyl.radius * std::sin(theta), z));
      }
    }
    // Top cap as concentric rings (bottom cap sits on the ground).
    const int nr = std::max(1, static_cast<int>(std::lround(cyl.radius / spacing)));
    map.add(cyl.base_center + Point3(0, 0, cyl.height));
    for (int i = 1; i <= nr; ++i) {
      const double rho = cyl.radius * i / nr;
      const int npts = std::max(3, static_cast<int>(std::lround(2.0 * M_PI * rho / spacing)));
      for (int j = 0; j < npts; ++j) {
        const double theta = 2.0 * M_PI * (j + rng.range(-0.25, 0.25)) / npts;
        map.add(cyl.base_center +
                Point3(rho * std::cos(theta), rho * std::sin(theta), cyl.height));
      }
    }
  }

  for (const auto& rect : scene.rects) {
    sample_patch(map, rect.origin, rect.edge_u, rect.edge_v, spacing, rng);
  }

  return map;
}

SynthScene synth_scene(const SynthParams& params) {
  if (params.object_count < 1) {
    throw InvalidParameterError("synth_scene: object count must be at least 1");
  }
  if (params.scan_count < 1 || !(params.area > 0.0) || !(params.scan_spacing > 0.0)) {
    throw InvalidParameterError("synth_scene: scan count, area and spacing must be positive");
  }

  SplitMix64 rng(params.seed);
  SynthScene out;

  // Smooth drive through the middle of the town.
  const double length = (params.scan_count - 1) * params.scan_spacing;
  const double amp = 2.5;
  const double wavelength = std::max(30.0, length / 2.0);
  std::vector<Point3> path;
  path.reserve(params.scan_count);
  for (int k = 0; k < params.scan_count; ++k) {
    const double x = -length / 2.0 + k * params.scan_spacing;
    const double phase = 2.0 * M_PI * (x + length / 2.0) / wavelength;
    const double y = amp * std::sin(phase);
    const double dydx = amp * std::cos(phase) * 2.0 * M_PI / wavelength;
    const double yaw = std::atan2(dydx, 1.0);
    path.emplace_back(x, y, params.sensor_height);
    TrajectoryNode node;
    node.timestamp = k * params.scan_period;
    node.pose = RigidTransform::from_xyz_yaw(x, y, params.sensor_height, yaw);
    out.ground_truth.push_back(node);
  }

  // Scatter objects, keeping them off the path and apart from each other.
  const double side = std::sqrt(params.area);
  std::vector<Point3> placed;
  auto place = [&]() {
    Point3 candidate = Point3::Zero();
    for (int attempt = 0; attempt < 200; ++attempt) {
      candidate = Point3(rng.range(-side / 2.0, side / 2.0), rng.range(-side / 2.0, side / 2.0), 0);
      double path_dist = std::numeric_limits<double>::infinity();
      for (const Point3& p : path) {
        path_dist = std::min(path_dist, (candidate.head<2>() - p.head<2>()).norm());
      }
      if (path_dist < 3.5) continue;
      bool clear = true;
      for (const Point3& p : placed) {
        if ((candidate.head<2>() - p.head<2>()).norm() < 7.0) {
          clear = false;
          break;
        }
      }
      if (clear) break;
    }
    placed.push_back(candidate);
    return candidate;
  };

  for (int i = 0; i < params.object_count; ++i) {
    const Point3 pos = place();
    const double yaw = rng.range(0.0, 2.0 * M_PI);
    switch (i % 4) {
      case 0: {  // box
        const Point3 half(rng.range(0.5, 1.8), rng.range(0.5, 1.8), rng.range(0.4, 1.8));
        out.world.boxes.push_back(
            BoxObject{RigidTransform::from_xyz_yaw(pos.x(), pos.y(), half.z(), yaw), half});
        break;
      }
      case 1: {  // cylinder
        out.world.cylinders.push_back(
            CylinderObject{pos, rng.range(0.4, 1.2), rng.range(1.5, 4.5)});
        break;
      }
      case 2: {  // vertical wall
        const double width = rng.range(3.0, 6.0);
        const double height = rng.range(2.0, 3.5);
        const Point3 along(std::cos(yaw), std::sin(yaw), 0.0);
        out.world.rects.push_back(
            RectObject{pos - 0.5 * width * along, width * along, Point3(0, 0, height)});
        break;
      }
      default: {  // horizontal platform
        const double w = rng.range(2.0, 4.0);
        const double d = rng.range(2.0, 4.0);
        const double z = rng.range(0.8, 2.0);
        const Point3 u = w * Point3(std::cos(yaw), std::sin(yaw), 0.0);
        const Point3 v = d * Point3(-std::sin(yaw), std::cos(yaw), 0.0);
        out.world.rects.push_back(
            RectObject{Point3(pos.x(), pos.y(), z) - 0.5 * u - 0.5 * v, u, v});
        break;
      }
    }
  }

  out.target_map = sample_surfaces(out.world, params.map_sample_spacing, rng.next());

  out.scans.reserve(params.scan_count);
  for (int k = 0; k < params.scan_count; ++k) {
    out.scans.push_back(raycast_scan(out.world, out.ground_truth[k].pose, params.lidar));
  }

  out.biased_odometry = out.ground_truth;
  for (int k = 0; k < params.scan_count; ++k) {
    out.biased_odometry[k].pose =
        RigidTransform::from_translation(k * params.drift_bias) * out.ground_truth[k].pose;
  }

  return out;
}

}  // namespace lolo
