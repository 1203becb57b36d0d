#include "lolo/segmentation/database.hpp"

#include <cstring>
#include <fstream>

namespace lolo {

namespace {

constexpr char kMagic[4] = {'L', 'S', 'D', 'B'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
void put(std::ostream& os, const T& value) {
  os.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T take(std::istream& is, const char* what) {
  T value;
  is.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!is) {
    throw ParseError(std::string("segment database truncated while reading ") + what +
                     " at byte " + std::to_string(static_cast<long long>(is.gcount())));
  }
  return value;
}

}  // namespace

SegmentDatabase::SegmentDatabase(std::vector<Segment> segments, std::string config_echo)
    : segments_(std::move(segments)), config_echo_(std::move(config_echo)) {
  std::vector<Point3> centroids;
  centroids.reserve(segments_.size());
  for (const Segment& s : segments_) centroids.push_back(s.centroid);
  centroid_index_ = std::make_unique<SpatialIndex>(std::move(centroids));
  descriptor_matrix_.resize(static_cast<Eigen::Index>(segments_.size()), 7);
  for (std::size_t i = 0; i < segments_.size(); ++i) {
    descriptor_matrix_.row(static_cast<Eigen::Index>(i)) = segments_[i].descriptor.transpose();
  }
}

SegmentDatabase SegmentDatabase::build(const PointCloud& target_map, const SegmentationConfig& cfg,
                                       std::string config_echo) {
  if (target_map.empty()) {
    throw InvalidInputError("build_segment_db: target map is empty");
  }
  std::vector<Segment> segments = segment_cloud(target_map, cfg);
  if (segments.empty()) {
    throw EmptyMapError("build_segment_db: segmentation produced no qualifying segment");
  }
  return SegmentDatabase(std::move(segments), std::move(config_echo));
}

SegmentDatabase SegmentDatabase::from_segments(std::vector<Segment> segments,
                                               std::string config_echo) {
  if (segments.empty()) {
    throw EmptyMapError("segment database cannot be empty");
  }
  return SegmentDatabase(std::move(segments), std::move(config_echo));
}

const Segment* SegmentDatabase::find_by_id(std::uint64_t id) const {
  for (const Segment& s : segments_) {
    if (s.id == id) return &s;
  }
  return nullptr;
}

std::vector<const Segment*> SegmentDatabase::query_by_location(const Point3& center,
                                                               double radius) const {
  if (!(radius > 0.0)) {
    throw InvalidParameterError("query_by_location: radius must be strictly positive");
  }
  std::vector<const Segment*> out;
  for (const auto& hit : centroid_index_->radius_search(center, radius)) {
    out.push_back(&segments_[static_cast<std::size_t>(hit.index)]);
  }
  return out;
}

void SegmentDatabase::save(const std::filesystem::path& path) const {
  std::ofstream os(path, std::ios::binary);
  if (!os) {
    throw IoError("cannot open " + path.string() + " for writing");
  }
  os.write(kMagic, sizeof(kMagic));
  put(os, kVersion);
  put(os, static_cast<std::uint32_t>(config_echo_.size()));
  os.write(config_echo_.data(), static_cast<std::streamsize>(config_echo_.size()));
  put(os, static_cast<std::uint64_t>(segments_.size()));
  for (const Segment& s : segments_) {
    put(os, s.id);
    for (int i = 0; i < 3; ++i) put(os, s.centroid(i));
    for (int i = 0; i < 7; ++i) put(os, s.descriptor(i));
    put(os, static_cast<std::uint64_t>(s.points.size()));
    for (const Point3& p : s.points.points) {
      for (int i = 0; i < 3; ++i) put(os, static_cast<float>(p(i)));
    }
  }
  if (!os) {
    throw IoError("write failed for " + path.string());
  }
}

SegmentDatabase SegmentDatabase::load(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) {
    throw IoError("cannot open " + path.string() + " for reading");
  }
  char magic[4];
  is.read(magic, sizeof(magic));
  if (!is || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw ParseError("not a segment database (bad magic at byte 0): " + path.string());
  }
  const auto version = take<std::uint32_t>(is, "version");
  if (version != kVersion) {
    throw ParseError("unsupported segment database version " + std::to_string(version));
  }
  const auto echo_len = take<std::uint32_t>(is, "config echo length");
  std::string echo(echo_len, '\0');
  is.read(echo.data(), echo_len);
  if (!is) {
    throw ParseError("segment database truncated inside config echo");
  }
  const auto count = take<std::uint64_t>(is, "segment count");
  std::vector<Segment> segments;
  segments.reserve(count);
  for (std::uint64_t k = 0; k < count; ++k) {
    Segment s;
    s.id = take<std::uint64_t>(is, "segment id");
    for (int i = 0; i < 3; ++i) s.centroid(i) = take<double>(is, "centroid");
    for (int i = 0; i < 7; ++i) s.descriptor(i) = take<double>(is, "descriptor");
    const auto n = take<std::uint64_t>(is, "point count");
    s.points.reserve(n);
    for (std::uint64_t i = 0; i < n; ++i) {
      const float x = take<float>(is, "point");
      const float y = take<float>(is, "point");
      const float z = take<float>(is, "point");
      s.points.add(static_cast<double>(x), static_cast<double>(y), static_cast<double>(z));
    }
    segments.push_back(std::move(s));
  }
  return SegmentDatabase(std::move(segments), std::move(echo));
}

}  // namespace lolo
