#pragma once

#include <vector>

#include "lolo/segmentation/database.hpp"

namespace lolo {

/// A putative (local segment, target segment) correspondence.
struct MatchCandidate {
  std::uint64_t local_id = 0;
  std::uint64_t target_id = 0;
  double descriptor_distance = 0.0;
  Point3 offset = Point3::Zero();  // target centroid - local centroid, both in {W}
};

struct MatchingConfig {
  double gate_radius = 50.0;         // m, centroid-distance gate around the pose estimate
  int k_nn = 3;                      // descriptor-space neighbors kept per local segment
  double max_descriptor_dist = 0.6;
};

/// Location-gated descriptor matching: target pool = segments within
/// gate_radius of the pose-estimate translation; each local segment (already
/// expressed in {W}) contributes its k_nn nearest pool segments in descriptor
/// space with distance <= max_descriptor_dist. Output is ordered by
/// (local id, target id).
std::vector<MatchCandidate> candidate_matches(const std::vector<Segment>& local_segments,
                                              const SegmentDatabase& db,
                                              const RigidTransform& pose_estimate,
                                              const MatchingConfig& cfg);

/// Keeps the largest group of mutually consistent candidates, where i and j
/// are consistent iff ||offset_i - offset_j|| <= max_offset_diff and the two
/// candidates reference distinct local and distinct target segments (shared
/// ids are competing alternatives, not partners). The group is grown
/// greedily from the candidate with the most consistency partners; ties
/// break on (descriptor_distance, local id, target id). The result is
/// order-independent, idempotent and returned sorted by (local id, target id).
std::vector<MatchCandidate> consistency_filter(const std::vector<MatchCandidate>& candidates,
                                               double max_offset_diff);

}  // namespace lolo
