#include "lolo/matching/ransac.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "lolo/core/alignment.hpp"
#include "lolo/core/rng.hpp"

namespace lolo {

namespace {

bool candidate_order(const MatchCandidate& a, const MatchCandidate& b) {
  if (a.local_id != b.local_id) return a.local_id < b.local_id;
  return a.target_id < b.target_id;
}

}  // namespace

std::optional<VerificationResult> ransac_verify(const std::vector<MatchCandidate>& candidates,
                                                std::span<const Segment> local_segments,
                                                std::span<const Segment> target_segments,
                                                const RansacConfig& cfg) {
  if (cfg.min_cluster_size < 2) {
    throw InvalidParameterError("ransac_verify: min_cluster_size must be at least 2");
  }
  if (!(cfg.inlier_tol > 0.0) || cfg.max_iterations < 1) {
    throw InvalidParameterError("ransac_verify: tolerance and iteration count must be positive");
  }

  const std::size_t n = candidates.size();
  if (n < 3) return std::nullopt;

  std::unordered_map<std::uint64_t, Point3> local_centroid, target_centroid;
  for (const Segment& s : local_segments) local_centroid.emplace(s.id, s.centroid);
  for (const Segment& s : target_segments) target_centroid.emplace(s.id, s.centroid);

  std::vector<Point3> src(n), dst(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto ls = local_centroid.find(candidates[i].local_id);
    const auto ts = target_centroid.find(candidates[i].target_id);
    if (ls == local_centroid.end() || ts == target_centroid.end()) {
      throw InvalidInputError("ransac_verify: candidate references an unknown segment id");
    }
    src[i] = ls->second;
    dst[i] = ts->second;
  }

  auto count_inliers = [&](const RigidTransform& t, std::vector<std::size_t>* members) {
    std::size_t count = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if ((t * src[i] - dst[i]).norm() <= cfg.inlier_tol) {
        ++count;
        if (members) members->push_back(i);
      }
    }
    return count;
  };

  SplitMix64 rng(cfg.rng_seed);
  RigidTransform best_model;
  std::size_t best_count = 0;
  double best_rmse = std::numeric_limits<double>::infinity();
  bool have_model = false;

  for (int it = 0; it < cfg.max_iterations; ++it) {
    std::size_t a = rng.below(n), b = rng.below(n), c = rng.below(n);
    if (a == b || a == c || b == c) continue;
    // Repeated segment ids cannot constrain a model; skip such samples.
    bool distinct = true;
    for (auto [i, j] : {std::pair{a, b}, std::pair{a, c}, std::pair{b, c}}) {
      if (candidates[i].local_id == candidates[j].local_id ||
          candidates[i].target_id == candidates[j].target_id) {
        distinct = false;
        break;
      }
    }
    if (!distinct) continue;
    const Point3 sample_src[3] = {src[a], src[b], src[c]};
    const Point3 sample_dst[3] = {dst[a], dst[b], dst[c]};
    RigidTransform model;
    try {
      model = umeyama_align(std::span<const Point3>(sample_src, 3),
                            std::span<const Point3>(sample_dst, 3));
    } catch (const DegenerateGeometryError&) {
      continue;
    }
    std::vector<std::size_t> members;
    const std::size_t count = count_inliers(model, &members);
    if (count < 2) continue;
    double sq = 0.0;
    for (std::size_t i : members) sq += (model * src[i] - dst[i]).squaredNorm();
    const double rmse = std::sqrt(sq / static_cast<double>(count));
    if (!have_model || count > best_count || (count == best_count && rmse < best_rmse)) {
      best_model = model;
      best_count = count;
      best_rmse = rmse;
      have_model = true;
    }
    if (best_count == n) break;  // every candidate already agrees
  }

  if (!have_model || best_count < static_cast<std::size_t>(cfg.min_cluster_size)) {
    return std::nullopt;
  }

  // Refit on the consensus set; the inlier list is recomputed under the
  // refit so the reported residual bound holds for the returned transform.
  std::vector<std::size_t> members;
  count_inliers(best_model, &members);
  if (members.size() >= 3) {
    std::vector<Point3> rs, rd;
    rs.reserve(members.size());
    rd.reserve(members.size());
    for (std::size_t i : members) {
      rs.push_back(src[i]);
      rd.push_back(dst[i]);
    }
    try {
      const RigidTransform refit = umeyama_align(rs, rd);
      std::vector<std::size_t> refit_members;
      if (count_inliers(refit, &refit_members) >= members.size()) {
        best_model = refit;
        members = std::move(refit_members);
      }
    } catch (const DegenerateGeometryError&) {
      // keep the minimal-sample model
    }
  }

  if (members.size() < static_cast<std::size_t>(cfg.min_cluster_size)) {
    return std::nullopt;
  }

  VerificationResult result;
  result.candidate_transform = best_model;
  double sq = 0.0;
  for (std::size_t i : members) {
    result.inliers.push_back(candidates[i]);
    sq += (best_model * src[i] - dst[i]).squaredNorm();
  }
  std::sort(result.inliers.begin(), result.inliers.end(), candidate_order);
  result.accepted = static_cast<int>(members.size());
  result.filtered_out = static_cast<int>(n - members.size());
  result.residual_rmse = std::sqrt(sq / static_cast<double>(members.size()));
  return result;
}

}  // namespace lolo
