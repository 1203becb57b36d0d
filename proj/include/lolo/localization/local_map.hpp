#pragma once

#include <deque>

#include "lolo/core/types.hpp"

namespace lolo {

/// Ring buffer of the last k scans with their odometry poses, densified
/// into one cloud in {W}. The densified cloud is always the union of the
/// stored scans, each transformed by its stored pose.
class LocalMap {
 public:
  /// k >= 1 scans are retained; older ones are evicted.
  explicit LocalMap(int capacity);

  /// Appends a (sensor-frame scan, pose) pair, evicting the oldest entry
  /// beyond capacity, and rebuilds the densified cloud.
  void add(PointCloud scan, const RigidTransform& pose);

  /// Relocalization feedback: left-multiplies `update` into every stored
  /// pose so the window stays consistent with the corrected trajectory.
  void apply_correction(const RigidTransform& update);

  const PointCloud& densified() const { return densified_; }
  std::size_t size() const { return entries_.size(); }
  int capacity() const { return capacity_; }
  bool empty() const { return entries_.empty(); }

 private:
  void rebuild();

  struct Entry {
    PointCloud scan;
    RigidTransform pose;
  };
  int capacity_;
  std::deque<Entry> entries_;
  PointCloud densified_;
};

/// Spec name for the buffer update; identical to LocalMap::add.
inline void densify_local_map(LocalMap& map, PointCloud scan, const RigidTransform& pose) {
  map.add(std::move(scan), pose);
}

}  // namespace lolo
