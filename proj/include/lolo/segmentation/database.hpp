#pragma once

#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "lolo/core/kdtree.hpp"
#include "lolo/segmentation/segmenter.hpp"

namespace lolo {

/// Target-map segments indexed by centroid position.
///
/// Immutable after construction; safe for concurrent read-only queries.
/// Serializes to a binary container that round-trips centroids and
/// descriptors bit-exactly (point coordinates are stored as float32).
class SegmentDatabase {
 public:
  /// Segments the map and describes every cluster. Throws EmptyMapError
  /// when no qualifying segment is produced.
  static SegmentDatabase build(const PointCloud& target_map, const SegmentationConfig& cfg,
                               std::string config_echo = {});

  static SegmentDatabase from_segments(std::vector<Segment> segments, std::string config_echo = {});

  const std::vector<Segment>& segments() const { return segments_; }
  std::size_t size() const { return segments_.size(); }
  const std::string& config_echo() const { return config_echo_; }

  const Segment& segment(std::size_t index) const { return segments_[index]; }
  const Segment* find_by_id(std::uint64_t id) const;

  /// All segments whose centroid lies within `radius` of `center`,
  /// ordered by (distance, id).
  std::vector<const Segment*> query_by_location(const Point3& center, double radius) const;

  /// File format: "LSDB" magic, u32 version, config echo, then per segment
  /// id, centroid (3xf64), descriptor (7xf64), point count, f32 xyz triplets.
  void save(const std::filesystem::path& path) const;
  static SegmentDatabase load(const std::filesystem::path& path);

 private:
  SegmentDatabase(std::vector<Segment> segments, std::string config_echo);

  std::vector<Segment> segments_;
  std::string config_echo_;
  std::unique_ptr<SpatialIndex> centroid_index_;
  Eigen::Matrix<double, Eigen::Dynamic, 7> descriptor_matrix_;
};

/// Spec name for database construction; identical to SegmentDatabase::build.
inline SegmentDatabase build_segment_db(const PointCloud& target_map,
                                        const SegmentationConfig& cfg) {
  return SegmentDatabase::build(target_map, cfg);
}

}  // namespace lolo
