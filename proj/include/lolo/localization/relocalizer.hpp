#pragma once

#include <optional>

#include "lolo/core/icp.hpp"
#include "lolo/localization/local_map.hpp"
#include "lolo/matching/ransac.hpp"

namespace lolo {

/// A verified global pose update and its parts.
struct PoseUpdate {
  RigidTransform prior;       // W_p: identity rotation, mean centroid offset
  RigidTransform icp_refine;  // W_ICP
  RigidTransform update;      // W_u = W_p * W_ICP^-1
  double residual_rmse = 0.0; // m
  int inlier_count = 0;
  bool icp_fallback = false;  // ICP rejected; the prior stands alone
};

/// Translation-only prior from the verified matches: identity rotation and
/// translation equal to the mean of the inlier centroid offsets.
/// Throws InvalidInputError on an empty inlier list.
RigidTransform prior_transform(const std::vector<MatchCandidate>& inliers);

/// ICP refinement between the prior-translated local cloud and the points
/// of the RANSAC-accepted target segments. The kernel runs with the target
/// inlier points as ICP source so that the returned W_ICP measures the
/// residual drift left after the prior; composing W_p * W_ICP^-1 then moves
/// the estimate onto the map. Propagates NoOverlapError; the caller falls
/// back to the prior alone.
RigidTransform refine_with_icp(const PointCloud& local_map_cloud,
                               const PointCloud& target_inlier_cloud, const RigidTransform& prior,
                               const IcpConfig& cfg);

/// W_u = W_p * W_ICP^-1 and W_t = W_u * W_e.
std::pair<RigidTransform, RigidTransform> compose_update(const RigidTransform& w_e,
                                                         const RigidTransform& w_p,
                                                         const RigidTransform& w_icp);

struct LocalizationConfig {
  SegmentationConfig segmentation;
  MatchingConfig matching;
  double max_offset_diff = 2.0;  // m, translation-consistency bound
  RansacConfig ransac;
  IcpConfig icp;
};

/// Per-attempt diagnostics plus the update when verification succeeded.
struct LocalizationAttempt {
  int candidates = 0;    // raw descriptor-space candidates
  int filtered_out = 0;  // candidates - accepted
  int accepted = 0;      // verified inliers
  bool success = false;
  double residual = 0.0;  // m
  std::optional<PoseUpdate> update;

  // Per-stage wall clock, informational.
  double segmentation_ms = 0.0;
  double description_ms = 0.0;
  double matching_ms = 0.0;
  double ransac_ms = 0.0;
  double icp_ms = 0.0;
};

/// Full localization attempt against the target database: segments the
/// densified local cloud, proposes descriptor matches in the location gate,
/// filters them for translation consistency, verifies by RANSAC and turns
/// the surviving matches into a refined PoseUpdate. A failed verification
/// is a normal no-localization outcome, not an error.
LocalizationAttempt localize(const LocalMap& local, const SegmentDatabase& db,
                             const RigidTransform& w_e, const LocalizationConfig& cfg);

}  // namespace lolo
