#pragma once

#include "lolo/core/types.hpp"

namespace lolo {

struct IcpConfig {
  int max_iterations = 50;
  double convergence_tol = 1e-4;           // m, translation-increment norm
  double max_correspondence_dist = 2.0;    // m
};

struct IcpResult {
  RigidTransform transform;  // cumulative, aligns source onto target
  double rmse = 0.0;         // over correspondences within max_correspondence_dist
  int iterations = 0;
  bool converged = false;
};

/// Point-to-point ICP with single-direction (source -> target) nearest
/// neighbor correspondences.
///
/// Stops when the translation increment norm drops below convergence_tol,
/// when max_iterations is reached, or when an update would increase the
/// correspondence RMSE (updates are accept-only, so RMSE never increases
/// between accepted iterations). Throws NoOverlapError when no
/// correspondence exists within max_correspondence_dist at iteration 0.
IcpResult icp_point_to_point(const PointCloud& source, const PointCloud& target,
                             const IcpConfig& config = {});

}  // namespace lolo
