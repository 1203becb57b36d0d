#include "lolo/odometry/features.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace lolo {

double compute_smoothness(std::span<const Point3> scan_line, int i, int half_window) {
  if (half_window < 1) {
    throw InvalidParameterError("compute_smoothness: half_window must be at least 1");
  }
  const int n = static_cast<int>(scan_line.size());
  if (i < half_window || i > n - 1 - half_window) {
    throw OutOfWindowError("compute_smoothness: index " + std::to_string(i) +
                           " too close to the line boundary");
  }
  const Point3& xi = scan_line[static_cast<std::size_t>(i)];
  const double range = xi.norm();
  if (!(range > 0.0)) {
    throw InvalidInputError("compute_smoothness: point coincides with the sensor origin");
  }
  Point3 sum = Point3::Zero();
  for (int j = i - half_window; j <= i + half_window; ++j) {
    if (j == i) continue;
    sum += xi - scan_line[static_cast<std::size_t>(j)];
  }
  return sum.norm() / (2.0 * half_window * range);
}

namespace {

struct LinePoint {
  Point3 position;
  double smoothness = 0.0;
  bool selectable = false;
};

}  // namespace

FeatureSet extract_features(const PointCloud& scan, const FeatureConfig& cfg) {
  FeatureSet out;
  if (scan.empty()) return out;
  if (!scan.has_rings()) {
    throw InvalidInputError("extract_features: scan carries no scan-line indices");
  }
  scan.validate();

  // Group points by ring, preserving acquisition order.
  std::map<int, std::vector<Point3>> lines;
  for (std::size_t i = 0; i < scan.size(); ++i) {
    lines[scan.rings[i]].push_back(scan.points[i]);
  }

  const int hw = cfg.half_window;
  for (auto& [ring, pts] : lines) {
    const int n = static_cast<int>(pts.size());
    if (n < 2 * hw + 1) continue;

    std::vector<LinePoint> line(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) line[static_cast<std::size_t>(i)].position = pts[static_cast<std::size_t>(i)];

    for (int i = hw; i < n - hw; ++i) {
      auto& lp = line[static_cast<std::size_t>(i)];
      lp.smoothness = compute_smoothness(pts, i, hw);
      lp.selectable = true;
    }

    // Occlusion boundaries: a jump between neighbors disqualifies the
    // half_window run on the farther side, whose surface may be occluded.
    for (int i = 0; i + 1 < n; ++i) {
      const Point3& a = pts[static_cast<std::size_t>(i)];
      const Point3& b = pts[static_cast<std::size_t>(i + 1)];
      if ((a - b).norm() <= cfg.occlusion_gap) continue;
      if (a.norm() < b.norm()) {
        for (int j = i + 1; j <= std::min(n - 1, i + hw); ++j) {
          line[static_cast<std::size_t>(j)].selectable = false;
        }
      } else {
        for (int j = std::max(0, i - hw + 1); j <= i; ++j) {
          line[static_cast<std::size_t>(j)].selectable = false;
        }
      }
    }

    // Grazing surfaces: beam direction nearly parallel to the local tangent.
    for (int i = 1; i + 1 < n; ++i) {
      auto& lp = line[static_cast<std::size_t>(i)];
      if (!lp.selectable) continue;
      const Point3 tangent = pts[static_cast<std::size_t>(i + 1)] - pts[static_cast<std::size_t>(i - 1)];
      const double tn = tangent.norm();
      const double pn = lp.position.norm();
      if (tn < 1e-12 || pn < 1e-12) continue;
      if (std::abs(tangent.dot(lp.position)) / (tn * pn) > cfg.parallel_cos_max) {
        lp.selectable = false;
      }
    }

    // Region-wise quota selection with neighborhood suppression.
    const int regions = std::max(1, cfg.regions_per_line);
    std::vector<bool> suppressed(static_cast<std::size_t>(n), false);
    for (int reg = 0; reg < regions; ++reg) {
      const int beg = static_cast<int>(static_cast<long long>(n) * reg / regions);
      const int end = static_cast<int>(static_cast<long long>(n) * (reg + 1) / regions);
      std::vector<int> idx;
      for (int i = beg; i < end; ++i) {
        if (line[static_cast<std::size_t>(i)].selectable) idx.push_back(i);
      }

      auto pick = [&](bool edges, int quota) {
        std::vector<int> order = idx;
        std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
          const double ca = line[static_cast<std::size_t>(a)].smoothness;
          const double cb = line[static_cast<std::size_t>(b)].smoothness;
          return edges ? ca > cb : ca < cb;
        });
        int taken = 0;
        for (int i : order) {
          if (taken >= quota) break;
          if (suppressed[static_cast<std::size_t>(i)]) continue;
          const double c = line[static_cast<std::size_t>(i)].smoothness;
          if (edges ? c <= cfg.edge_threshold : c >= cfg.planar_threshold) break;
          if (edges) {
            out.edge_points.add(line[static_cast<std::size_t>(i)].position, ring);
            out.edge_smoothness.push_back(c);
          } else {
            out.planar_points.add(line[static_cast<std::size_t>(i)].position, ring);
            out.planar_smoothness.push_back(c);
          }
          ++taken;
          for (int j = std::max(0, i - hw); j <= std::min(n - 1, i + hw); ++j) {
            suppressed[static_cast<std::size_t>(j)] = true;
          }
        }
      };

      pick(true, cfg.edge_quota_per_region);
      pick(false, cfg.planar_quota_per_region);
    }
  }

  return out;
}

FeatureSet transform_features(const FeatureSet& features, const RigidTransform& t) {
  FeatureSet out;
  out.edge_points = transform_cloud(features.edge_points, t);
  out.edge_smoothness = features.edge_smoothness;
  out.planar_points = transform_cloud(features.planar_points, t);
  out.planar_smoothness = features.planar_smoothness;
  return out;
}

}  // namespace lolo
