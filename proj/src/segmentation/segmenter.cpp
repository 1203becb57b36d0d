#include "lolo/segmentation/segmenter.hpp"

#include <deque>

#include "lolo/core/kdtree.hpp"
#include "lolo/core/voxel_grid.hpp"

namespace lolo {

std::vector<PointCloud> extract_clusters(const PointCloud& cloud, const SegmentationConfig& cfg) {
  if (!(cfg.cluster_radius > 0.0)) {
    throw InvalidParameterError("cluster radius must be strictly positive");
  }
  if (cfg.min_segment_size < 1 || cfg.max_segment_size < cfg.min_segment_size) {
    throw InvalidParameterError("segment size bounds must satisfy 1 <= min <= max");
  }

  PointCloud working;
  if (cfg.drop_ground) {
    working.reserve(cloud.size());
    for (const Point3& p : cloud.points) {
      if (p.z() >= cfg.ground_min_z) working.add(p);
    }
  } else {
    working.points = cloud.points;
  }
  working = voxel_downsample(working, VoxelGridSpec{cfg.voxel_leaf, Point3::Zero()});

  std::vector<PointCloud> clusters;
  if (working.empty()) return clusters;

  const SpatialIndex index(working);
  const int n = static_cast<int>(working.size());
  std::vector<bool> visited(static_cast<std::size_t>(n), false);

  // BFS flood fill in index order: each component is discovered at its
  // lowest member index, which fixes cluster order and ids.
  for (int seed = 0; seed < n; ++seed) {
    if (visited[static_cast<std::size_t>(seed)]) continue;
    visited[static_cast<std::size_t>(seed)] = true;
    std::vector<int> members{seed};
    std::deque<int> frontier{seed};
    while (!frontier.empty()) {
      const int cur = frontier.front();
      frontier.pop_front();
      for (const auto& nb :
           index.radius_search(working.points[static_cast<std::size_t>(cur)], cfg.cluster_radius)) {
        if (visited[static_cast<std::size_t>(nb.index)]) continue;
        visited[static_cast<std::size_t>(nb.index)] = true;
        members.push_back(nb.index);
        frontier.push_back(nb.index);
      }
    }
    const int size = static_cast<int>(members.size());
    if (size < cfg.min_segment_size || size > cfg.max_segment_size) continue;
    std::sort(members.begin(), members.end());
    PointCloud cluster;
    cluster.reserve(members.size());
    for (int m : members) cluster.add(working.points[static_cast<std::size_t>(m)]);
    clusters.push_back(std::move(cluster));
  }
  return clusters;
}

std::vector<Segment> make_segments(std::vector<PointCloud> clusters) {
  std::vector<Segment> segments;
  segments.reserve(clusters.size());
  std::uint64_t next_id = 0;
  for (auto& cluster : clusters) {
    Segment seg;
    seg.id = next_id;
    try {
      seg.descriptor = describe_eigen(cluster);
    } catch (const Error&) {
      continue;  // too small or zero-extent cluster, nothing to describe
    }
    seg.centroid = centroid(cluster);
    seg.points = std::move(cluster);
    segments.push_back(std::move(seg));
    ++next_id;
  }
  return segments;
}

std::vector<Segment> segment_cloud(const PointCloud& cloud, const SegmentationConfig& cfg) {
  return make_segments(extract_clusters(cloud, cfg));
}

}  // namespace lolo
