#include "lolo/core/icp.hpp"

#include <cmath>
#include <vector>

#include "lolo/core/alignment.hpp"
#include "lolo/core/kdtree.hpp"

namespace lolo {

namespace {

struct Correspondences {
  std::vector<Point3> moved;    // source points under the current transform
  std::vector<Point3> matched;  // their nearest targets
  double rmse = 0.0;
};

Correspondences associate(const PointCloud& source, const SpatialIndex& target_index,
                          const RigidTransform& t, double max_dist) {
  Correspondences c;
  c.moved.reserve(source.size());
  c.matched.reserve(source.size());
  double sq_sum = 0.0;
  for (const Point3& p : source.points) {
    const Point3 q = t * p;
    const auto nn = target_index.knn(q, 1);
    if (nn.empty() || nn[0].distance > max_dist) continue;
    c.moved.push_back(q);
    c.matched.push_back(target_index.point(nn[0].index));
    sq_sum += nn[0].distance * nn[0].distance;
  }
  if (!c.moved.empty()) {
    c.rmse = std::sqrt(sq_sum / static_cast<double>(c.moved.size()));
  }
  return c;
}

}  // namespace

IcpResult icp_point_to_point(const PointCloud& source, const PointCloud& target,
                             const IcpConfig& config) {
  if (source.empty() || target.empty()) {
    throw InvalidInputError("icp_point_to_point: clouds must be non-empty");
  }
  if (config.max_iterations <= 0 || !(config.convergence_tol > 0.0) ||
      !(config.max_correspondence_dist > 0.0)) {
    throw InvalidParameterError("icp_point_to_point: parameters must be positive");
  }

  const SpatialIndex target_index(target);
  IcpResult result;
  Correspondences corr =
      associate(source, target_index, result.transform, config.max_correspondence_dist);
  if (corr.moved.empty()) {
    throw NoOverlapError("icp_point_to_point: no correspondences within " +
                         std::to_string(config.max_correspondence_dist) + " m");
  }

  for (int it = 0; it < config.max_iterations; ++it) {
    RigidTransform delta;
    try {
      delta = umeyama_align(corr.moved, corr.matched);
    } catch (const Error&) {
      break;  // too few or degenerate correspondences; keep the current estimate
    }
    const RigidTransform candidate = delta * result.transform;
    const Correspondences next =
        associate(source, target_index, candidate, config.max_correspondence_dist);
    if (next.moved.empty() || next.rmse > corr.rmse) {
      break;  // the step would not improve the fit; reject it
    }
    result.transform = candidate;
    result.iterations = it + 1;
    corr = next;
    if (delta.translation().norm() < config.convergence_tol) {
      result.converged = true;
      break;
    }
  }

  result.rmse = corr.rmse;
  return result;
}

}  // namespace lolo
