#include "lolo/localization/relocalizer.hpp"

#include <chrono>

#include "lolo/core/voxel_grid.hpp"
#include <set>

namespace lolo {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

// Points farther from the target than keep_dist can never enter a
// correspondence; dropping them leaves the ICP result unchanged and the
// iteration cheap.
PointCloud crop_to_overlap(const PointCloud& source, const PointCloud& target, double keep_dist) {
  const SpatialIndex index(target);
  PointCloud out;
  for (const Point3& p : source.points) {
    if (index.knn(p, 1)[0].distance <= keep_dist) out.add(p);
  }
  return out;
}

}  // namespace

RigidTransform prior_transform(const std::vector<MatchCandidate>& inliers) {
  if (inliers.empty()) {
    throw InvalidInputError("prior_transform: no inliers");
  }
  Point3 mean = Point3::Zero();
  for (const MatchCandidate& c : inliers) mean += c.offset;
  mean /= static_cast<double>(inliers.size());
  return RigidTransform::from_translation(mean);
}

RigidTransform refine_with_icp(const PointCloud& local_map_cloud,
                               const PointCloud& target_inlier_cloud, const RigidTransform& prior,
                               const IcpConfig& cfg) {
  if (target_inlier_cloud.empty() || local_map_cloud.empty()) {
    throw NoOverlapError("refine_with_icp: empty cloud");
  }
  // Partial-to-full registration: the translated local cloud (ICP source)
  // aligns onto the accepted target points. W_ICP is the inverse of that
  // alignment, the residual drift the prior left behind, so the printed
  // composition W_u = W_p * W_ICP^-1 moves the estimate onto the map.
  const PointCloud translated =
      crop_to_overlap(transform_cloud(local_map_cloud, prior), target_inlier_cloud,
                      3.0 * cfg.max_correspondence_dist);
  if (translated.empty()) {
    throw NoOverlapError("refine_with_icp: no local points near the target inliers");
  }
  return icp_point_to_point(translated, target_inlier_cloud, cfg).transform.inverse();
}

std::pair<RigidTransform, RigidTransform> compose_update(const RigidTransform& w_e,
                                                         const RigidTransform& w_p,
                                                         const RigidTransform& w_icp) {
  const RigidTransform w_u = w_p * w_icp.inverse();
  return {w_u, w_u * w_e};
}

LocalizationAttempt localize(const LocalMap& local, const SegmentDatabase& db,
                             const RigidTransform& w_e, const LocalizationConfig& cfg) {
  if (local.empty()) {
    throw InvalidInputError("localize: local map is empty");
  }
  LocalizationAttempt attempt;

  auto t0 = Clock::now();
  std::vector<PointCloud> clusters = extract_clusters(local.densified(), cfg.segmentation);
  attempt.segmentation_ms = ms_since(t0);

  t0 = Clock::now();
  const std::vector<Segment> local_segments = make_segments(std::move(clusters));
  attempt.description_ms = ms_since(t0);

  t0 = Clock::now();
  const std::vector<MatchCandidate> candidates =
      candidate_matches(local_segments, db, w_e, cfg.matching);
  attempt.candidates = static_cast<int>(candidates.size());
  const std::vector<MatchCandidate> consistent =
      consistency_filter(candidates, cfg.max_offset_diff);
  attempt.matching_ms = ms_since(t0);

  t0 = Clock::now();
  const std::optional<VerificationResult> verified =
      ransac_verify(consistent, local_segments, db.segments(), cfg.ransac);
  attempt.ransac_ms = ms_since(t0);

  if (!verified) {
    attempt.filtered_out = attempt.candidates;
    return attempt;
  }

  PoseUpdate update;
  update.inlier_count = verified->accepted;
  update.prior = prior_transform(verified->inliers);

  // Points of the RANSAC-accepted target segments only.
  std::set<std::uint64_t> target_ids;
  for (const MatchCandidate& c : verified->inliers) target_ids.insert(c.target_id);
  PointCloud target_inlier_cloud;
  for (std::uint64_t id : target_ids) {
    if (const Segment* seg = db.find_by_id(id)) {
      target_inlier_cloud.append(seg->points);
    }
  }

  t0 = Clock::now();
  try {
    if (target_inlier_cloud.empty()) {
      throw NoOverlapError("no target inlier points");
    }
    // Same computation as refine_with_icp (on the voxel-filtered local
    // cloud), keeping the kernel's RMSE as the update residual.
    const PointCloud local_filtered =
        voxel_downsample(local.densified(), VoxelGridSpec{cfg.segmentation.voxel_leaf});
    const PointCloud translated =
        crop_to_overlap(transform_cloud(local_filtered, update.prior), target_inlier_cloud,
                        3.0 * cfg.icp.max_correspondence_dist);
    if (translated.empty()) {
      throw NoOverlapError("no local points near the target inliers");
    }
    const IcpResult icp = icp_point_to_point(translated, target_inlier_cloud, cfg.icp);
    update.icp_refine = icp.transform.inverse();
    update.residual_rmse = icp.rmse;
  } catch (const NoOverlapError&) {
    update.icp_refine = RigidTransform::identity();
    update.icp_fallback = true;
    update.residual_rmse = verified->residual_rmse;
  }
  attempt.icp_ms = ms_since(t0);

  std::tie(update.update, std::ignore) = compose_update(w_e, update.prior, update.icp_refine);

  attempt.success = true;
  attempt.accepted = verified->accepted;
  attempt.filtered_out = attempt.candidates - attempt.accepted;
  attempt.residual = update.residual_rmse;
  attempt.update = std::move(update);
  return attempt;
}

}  // namespace lolo
