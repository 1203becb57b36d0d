#include "lolo/matching/matching.hpp"

#include <algorithm>

namespace lolo {

namespace {

bool candidate_order(const MatchCandidate& a, const MatchCandidate& b) {
  if (a.local_id != b.local_id) return a.local_id < b.local_id;
  return a.target_id < b.target_id;
}

// Tie-break used by the greedy clique: better candidate first.
bool greedy_order(const MatchCandidate& a, const MatchCandidate& b) {
  if (a.descriptor_distance != b.descriptor_distance) {
    return a.descriptor_distance < b.descriptor_distance;
  }
  if (a.local_id != b.local_id) return a.local_id < b.local_id;
  return a.target_id < b.target_id;
}

}  // namespace

std::vector<MatchCandidate> candidate_matches(const std::vector<Segment>& local_segments,
                                              const SegmentDatabase& db,
                                              const RigidTransform& pose_estimate,
                                              const MatchingConfig& cfg) {
  if (!(cfg.gate_radius > 0.0)) {
    throw InvalidParameterError("candidate_matches: gate radius must be strictly positive");
  }
  if (cfg.k_nn < 1) {
    throw InvalidParameterError("candidate_matches: k_nn must be at least 1");
  }

  const std::vector<const Segment*> pool =
      db.query_by_location(pose_estimate.translation(), cfg.gate_radius);
  std::vector<MatchCandidate> out;
  if (pool.empty()) return out;

  std::vector<std::pair<double, const Segment*>> scored;
  scored.reserve(pool.size());
  for (const Segment& local : local_segments) {
    scored.clear();
    for (const Segment* target : pool) {
      const double dist = (local.descriptor - target->descriptor).norm();
      if (dist <= cfg.max_descriptor_dist) {
        scored.emplace_back(dist, target);
      }
    }
    std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
      if (a.first != b.first) return a.first < b.first;
      return a.second->id < b.second->id;
    });
    const std::size_t keep = std::min<std::size_t>(scored.size(), static_cast<std::size_t>(cfg.k_nn));
    for (std::size_t i = 0; i < keep; ++i) {
      MatchCandidate c;
      c.local_id = local.id;
      c.target_id = scored[i].second->id;
      c.descriptor_distance = scored[i].first;
      c.offset = scored[i].second->centroid - local.centroid;
      out.push_back(c);
    }
  }
  std::sort(out.begin(), out.end(), candidate_order);
  return out;
}

std::vector<MatchCandidate> consistency_filter(const std::vector<MatchCandidate>& candidates,
                                               double max_offset_diff) {
  if (!(max_offset_diff > 0.0)) {
    throw InvalidParameterError("consistency_filter: max offset difference must be positive");
  }
  const std::size_t n = candidates.size();
  if (n <= 1) return candidates;

  // Candidates sharing a segment id are competing alternatives under a
  // rigid transform, never partners, so consistency also requires
  // distinct local and target ids.
  std::vector<std::vector<bool>> consistent(n, std::vector<bool>(n, false));
  std::vector<int> degree(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    consistent[i][i] = true;
    for (std::size_t j = i + 1; j < n; ++j) {
      if (candidates[i].local_id != candidates[j].local_id &&
          candidates[i].target_id != candidates[j].target_id &&
          (candidates[i].offset - candidates[j].offset).norm() <= max_offset_diff) {
        consistent[i][j] = consistent[j][i] = true;
        ++degree[i];
        ++degree[j];
      }
    }
  }

  // Preference: more partners first, then the deterministic tie-break.
  auto prefer = [&](std::size_t a, std::size_t b) {
    if (degree[a] != degree[b]) return degree[a] > degree[b];
    return greedy_order(candidates[a], candidates[b]);
  };

  std::size_t seed = 0;
  for (std::size_t i = 1; i < n; ++i) {
    if (prefer(i, seed)) seed = i;
  }

  std::vector<std::size_t> clique{seed};
  std::vector<bool> in_clique(n, false);
  in_clique[seed] = true;
  for (;;) {
    bool found = false;
    std::size_t best = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (in_clique[i]) continue;
      bool ok = true;
      for (std::size_t m : clique) {
        if (!consistent[i][m]) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      if (!found || prefer(i, best)) {
        best = i;
        found = true;
      }
    }
    if (!found) break;
    clique.push_back(best);
    in_clique[best] = true;
  }

  std::vector<MatchCandidate> out;
  out.reserve(clique.size());
  for (std::size_t i : clique) out.push_back(candidates[i]);
  std::sort(out.begin(), out.end(), candidate_order);
  return out;
}

}  // namespace lolo
