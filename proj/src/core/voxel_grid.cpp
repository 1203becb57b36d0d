#include "lolo/core/voxel_grid.hpp"

#include <cmath>
#include <cstdint>
#include <unordered_map>

namespace lolo {

namespace {

struct VoxelKey {
  std::int64_t x, y, z;
  bool operator==(const VoxelKey& o) const { return x == o.x && y == o.y && z == o.z; }
};

struct VoxelKeyHash {
  std::size_t operator()(const VoxelKey& k) const {
    std::uint64_t h = 1469598103934665603ull;
    for (std::uint64_t v : {static_cast<std::uint64_t>(k.x), static_cast<std::uint64_t>(k.y),
                            static_cast<std::uint64_t>(k.z)}) {
      h ^= v;
      h *= 1099511628211ull;
    }
    return static_cast<std::size_t>(h);
  }
};

}  // namespace

PointCloud voxel_downsample(const PointCloud& cloud, const VoxelGridSpec& spec) {
  if (!(spec.leaf_size > 0.0)) {
    throw InvalidParameterError("voxel leaf size must be strictly positive");
  }

  struct Accum {
    Point3 sum = Point3::Zero();
    std::size_t count = 0;
  };
  std::unordered_map<VoxelKey, std::size_t, VoxelKeyHash> slot_of;
  std::vector<Accum> accums;
  slot_of.reserve(cloud.size());

  const double inv_leaf = 1.0 / spec.leaf_size;
  for (const Point3& p : cloud.points) {
    const VoxelKey key{static_cast<std::int64_t>(std::floor((p.x() - spec.origin.x()) * inv_leaf)),
                       static_cast<std::int64_t>(std::floor((p.y() - spec.origin.y()) * inv_leaf)),
                       static_cast<std::int64_t>(std::floor((p.z() - spec.origin.z()) * inv_leaf))};
    auto [it, inserted] = slot_of.try_emplace(key, accums.size());
    if (inserted) {
      accums.emplace_back();
    }
    Accum& a = accums[it->second];
    a.sum += p;
    ++a.count;
  }

  PointCloud out;
  out.reserve(accums.size());
  for (const Accum& a : accums) {
    out.add(a.sum / static_cast<double>(a.count));
  }
  return out;
}

}  // namespace lolo
