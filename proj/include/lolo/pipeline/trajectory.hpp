#pragma once

#include <filesystem>
#include <vector>

#include "lolo/core/types.hpp"

namespace lolo {

/// One pose sample of an estimated (or ground-truth) trajectory.
struct TrajectoryNode {
  double timestamp = 0.0;  // s, strictly increasing along a trajectory
  RigidTransform pose;     // in {W}
  enum class Source { Odometry, Corrected } source = Source::Odometry;
};

/// Writes one line per node: "timestamp tx ty tz qx qy qz qw" with the
/// quaternion scalar-last, unit-normalized, and qw >= 0 for a canonical
/// sign. Timestamps carry 6 decimals; pose components use the shortest
/// round-trip decimal form. Rotations are validated orthonormal (1e-6) at
/// write time. Throws IoError on an unwritable path.
void write_trajectory(const std::vector<TrajectoryNode>& nodes, const std::filesystem::path& path);

/// Reads the format written by write_trajectory; poses round-trip within
/// 1e-9. Source flags are not stored and read back as Odometry.
std::vector<TrajectoryNode> read_trajectory(const std::filesystem::path& path);

struct AbsErrorStats {
  std::vector<double> timestamps;
  std::vector<double> per_node;  // m, 3D Euclidean distance of positions
  double mean = 0.0;
  double max = 0.0;
  double bin_width = 0.5;       // m
  std::vector<int> histogram;   // occurrence counts per bin
};

/// Per-node absolute translation error against a ground-truth trajectory.
/// Estimate timestamps must be a subset of the ground-truth timestamps
/// (exact match, no interpolation); a missing timestamp raises
/// InvalidInputError naming it.
AbsErrorStats eval_abs_error(const std::vector<TrajectoryNode>& estimate,
                             const std::vector<TrajectoryNode>& ground_truth);

}  // namespace lolo
