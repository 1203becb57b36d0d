// Shared planted-truth generators for the unit and acceptance suites.
#pragma once

#include <cmath>
#include <random>

#include "lolo/core/kdtree.hpp"
#include "lolo/localization/relocalizer.hpp"
#include "lolo/pipeline/synth.hpp"

namespace lolo::harness {

inline Segment make_segment_stub(std::uint64_t id, const Point3& centroid,
                                 const Descriptor& desc = Descriptor::Zero()) {
  Segment s;
  s.id = id;
  s.centroid = centroid;
  s.descriptor = desc;
  return s;
}

// ---------------------------------------------------------------------------
// Planted-transform match sets (RANSAC harness)
// ---------------------------------------------------------------------------

struct PlantedMatches {
  std::vector<MatchCandidate> candidates;
  std::vector<Segment> local_segs;
  std::vector<Segment> target_segs;
  RigidTransform truth;
};

/// n_true centroid pairs related by one rigid transform plus n_decoys
/// random pairs whose residual under the planted transform stays above
/// min_decoy_residual. Decoy target centroids are drawn within decoy_span,
/// so smaller spans create decoys that can accidentally agree with each
/// other (exercising small min_cluster_size settings).
inline PlantedMatches plant_matches(std::mt19937_64& rng, int n_true, int n_decoys,
                                    double decoy_span = 30.0, double min_decoy_residual = 1.0) {
  PlantedMatches out;
  std::uniform_real_distribution<double> span(-25.0, 25.0);
  std::uniform_real_distribution<double> angle(-0.2, 0.2);
  std::uniform_real_distribution<double> shift(-3.0, 3.0);
  out.truth = RigidTransform(Eigen::AngleAxisd(angle(rng), Point3::UnitZ()).toRotationMatrix(),
                             Point3(shift(rng), shift(rng), 0.2 * shift(rng)));

  std::uint64_t next_id = 0;
  auto add_pair = [&](const Point3& local_c, const Point3& target_c) {
    const std::uint64_t id = next_id++;
    out.local_segs.push_back(make_segment_stub(id, local_c));
    out.target_segs.push_back(make_segment_stub(id, target_c));
    MatchCandidate c;
    c.local_id = id;
    c.target_id = id;
    c.offset = target_c - local_c;
    out.candidates.push_back(c);
  };

  for (int i = 0; i < n_true; ++i) {
    const Point3 local_c(span(rng), span(rng), std::abs(span(rng)) / 10.0);
    add_pair(local_c, out.truth * local_c);
  }
  std::uniform_real_distribution<double> decoy(-decoy_span, decoy_span);
  for (int i = 0; i < n_decoys; ++i) {
    for (;;) {
      const Point3 local_c(span(rng), span(rng), std::abs(span(rng)) / 10.0);
      const Point3 target_c(decoy(rng), decoy(rng), std::abs(decoy(rng)) / 10.0);
      if ((out.truth * local_c - target_c).norm() >= min_decoy_residual) {
        add_pair(local_c, target_c);
        break;
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Half-visible segment scenario (ICP refinement benefit)
// ---------------------------------------------------------------------------

struct HalfVisibleScenario {
  PointCloud target_points;   // complete segment, world frame
  PointCloud local_points;    // visible half, displaced by the planted drift
  RigidTransform drift;       // local = drift(visible half of target)
  RigidTransform prior;       // centroid-offset prior, identity rotation
};

/// A box segment of which only the half facing the sensor is observed.
/// The incomplete observation shifts the local centroid toward the sensor,
/// so the centroid prior alone misplaces the cloud.
inline HalfVisibleScenario half_visible_scenario(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dim(0.6, 1.6);
  std::uniform_real_distribution<double> drift_d(-0.3, 0.3);
  std::uniform_real_distribution<double> azim(0.0, 2.0 * M_PI);

  HalfVisibleScenario s;
  const Point3 half(dim(rng), dim(rng), dim(rng));
  const Point3 center(5.0, -3.0, half.z());

  // Dense box surface sampling (all six faces, axis aligned).
  const double spacing = 0.06;
  auto sample_face = [&](const Point3& origin, const Point3& u, const Point3& v) {
    const int nu = std::max(1, static_cast<int>(std::lround(u.norm() / spacing)));
    const int nv = std::max(1, static_cast<int>(std::lround(v.norm() / spacing)));
    for (int i = 0; i <= nu; ++i) {
      for (int j = 0; j <= nv; ++j) {
        s.target_points.add(origin + (static_cast<double>(i) / nu) * u +
                            (static_cast<double>(j) / nv) * v);
      }
    }
  };
  const Point3 ex = Point3::UnitX(), ey = Point3::UnitY(), ez = Point3::UnitZ();
  sample_face(center + half.x() * ex - half.y() * ey - half.z() * ez, 2 * half.y() * ey,
              2 * half.z() * ez);
  sample_face(center - half.x() * ex - half.y() * ey - half.z() * ez, 2 * half.y() * ey,
              2 * half.z() * ez);
  sample_face(center + half.y() * ey - half.x() * ex - half.z() * ez, 2 * half.x() * ex,
              2 * half.z() * ez);
  sample_face(center - half.y() * ey - half.x() * ex - half.z() * ez, 2 * half.x() * ex,
              2 * half.z() * ez);
  sample_face(center + half.z() * ez - half.x() * ex - half.y() * ey, 2 * half.x() * ex,
              2 * half.y() * ey);
  sample_face(center - half.z() * ez - half.x() * ex - half.y() * ey, 2 * half.x() * ex,
              2 * half.y() * ey);

  // Keep the half facing the sensor; the cut runs through the centroid.
  const double view = azim(rng);
  const Point3 toward(std::cos(view), std::sin(view), 0.0);
  PointCloud visible;
  for (const Point3& p : s.target_points.points) {
    if ((p - center).dot(toward) >= -0.02) visible.add(p);
  }

  s.drift = RigidTransform::from_translation(Point3(drift_d(rng), drift_d(rng), 0.0));
  s.local_points = transform_cloud(visible, s.drift);

  // Single-match centroid prior, exactly as the localization path builds it.
  const Point3 offset = centroid(s.target_points) - centroid(s.local_points);
  s.prior = RigidTransform::from_translation(offset);
  return s;
}

/// Root-mean-square nearest-neighbor distance from t(cloud) to the target.
inline double surface_rmse(const PointCloud& cloud, const SpatialIndex& target,
                           const RigidTransform& t) {
  double sq = 0.0;
  for (const Point3& p : cloud.points) {
    const auto nn = target.knn(t * p, 1);
    sq += nn[0].distance * nn[0].distance;
  }
  return std::sqrt(sq / static_cast<double>(cloud.size()));
}

// ---------------------------------------------------------------------------
// Town localization fixture (planted odometry offsets against a real map)
// ---------------------------------------------------------------------------

struct TownFixture {
  SynthScene scene;
  SegmentDatabase db;
  LocalizationConfig config;

  TownFixture(std::uint64_t seed, int objects, int scan_count,
              SegmentationConfig seg = town_segmentation())
      : scene(make_scene(seed, objects, scan_count)),
        db(SegmentDatabase::build(scene.target_map, seg)) {
    config.segmentation = seg;
    // Partial views rank behind look-alike decoys in descriptor space;
    // admit more neighbors and let the geometric stages sort them out.
    config.matching.k_nn = 5;
  }

  // Ring spacing of a rotating lidar leaves decimeter vertical gaps at
  // range; the cluster radius must bridge them for whole-object segments.
  static SegmentationConfig town_segmentation() {
    SegmentationConfig seg;
    seg.cluster_radius = 0.35;
    return seg;
  }

  static SynthScene make_scene(std::uint64_t seed, int objects, int scan_count) {
    SynthParams params;
    params.seed = seed;
    params.object_count = objects;
    params.scan_count = scan_count;
    params.area = 2500.0;
    return synth_scene(params);
  }

  /// Local map of the last `window` scans placed at drifted poses
  /// drift * truth, mimicking an odometry estimate with a planted offset.
  LocalMap drifted_local_map(int window, int last_scan, const RigidTransform& drift) const {
    LocalMap local(window);
    for (int k = last_scan - window + 1; k <= last_scan; ++k) {
      local.add(scene.scans[static_cast<std::size_t>(k)],
                drift * scene.ground_truth[static_cast<std::size_t>(k)].pose);
    }
    return local;
  }
};

}  // namespace lolo::harness
