#pragma once

#include <optional>
#include <span>

#include "lolo/matching/matching.hpp"

namespace lolo {

struct RansacConfig {
  int min_cluster_size = 3;    // minimum accepted inlier count
  double inlier_tol = 0.7;     // m, centroid residual bound
  int max_iterations = 300;
  std::uint64_t rng_seed = 13;
};

struct VerificationResult {
  std::vector<MatchCandidate> inliers;  // sorted by (local id, target id)
  RigidTransform candidate_transform;   // maps local centroids onto target centroids in {W}
  int filtered_out = 0;                 // candidates rejected by this stage
  int accepted = 0;                     // == inliers.size()
  double residual_rmse = 0.0;           // m, over the inlier centroid pairs
};

/// RANSAC over candidate centroid pairs: sample 3 pairs, fit a rigid
/// transform, count inliers whose post-transform centroid residual is
/// within inlier_tol. The best model is refit on all its inliers and the
/// inlier set recomputed under the refit, so every returned inlier
/// satisfies the residual bound under candidate_transform.
///
/// Returns nullopt ("no localization", a normal outcome) for fewer than 3
/// candidates or when no model reaches min_cluster_size inliers.
/// Deterministic for a fixed rng_seed.
std::optional<VerificationResult> ransac_verify(const std::vector<MatchCandidate>& candidates,
                                                std::span<const Segment> local_segments,
                                                std::span<const Segment> target_segments,
                                                const RansacConfig& cfg);

}  // namespace lolo
