#include "lolo/localization/local_map.hpp"

namespace lolo {

LocalMap::LocalMap(int capacity) : capacity_(capacity) {
  if (capacity < 1) {
    throw InvalidParameterError("local map capacity must be at least 1");
  }
}

void LocalMap::add(PointCloud scan, const RigidTransform& pose) {
  if (!pose.is_valid(1e-9)) {
    throw InvalidInputError("local map pose is not a valid rigid transform");
  }
  scan.rings.clear();
  scan.intensities.clear();
  entries_.push_back(Entry{std::move(scan), pose});
  while (entries_.size() > static_cast<std::size_t>(capacity_)) {
    entries_.pop_front();
  }
  rebuild();
}

void LocalMap::apply_correction(const RigidTransform& update) {
  for (Entry& e : entries_) {
    e.pose = update * e.pose;
  }
  rebuild();
}

void LocalMap::rebuild() {
  densified_ = PointCloud{};
  std::size_t total = 0;
  for (const Entry& e : entries_) total += e.scan.size();
  densified_.reserve(total);
  for (const Entry& e : entries_) {
    for (const Point3& p : e.scan.points) {
      densified_.add(e.pose * p);
    }
  }
}

}  // namespace lolo
