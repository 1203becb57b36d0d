#pragma once

#include "lolo/core/types.hpp"

namespace lolo {

struct VoxelGridSpec {
  double leaf_size = 0.05;
  Point3 origin = Point3::Zero();
};

/// Replaces the points of each occupied voxel by their arithmetic mean.
///
/// Output order is the first-occurrence order of the voxels, so the result
/// is deterministic for a given input. Attributes are dropped. Throws
/// InvalidParameterError when leaf_size is not strictly positive.
PointCloud voxel_downsample(const PointCloud& cloud, const VoxelGridSpec& spec);

}  // namespace lolo
