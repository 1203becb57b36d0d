#include "lolo/odometry/motion.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace lolo {

namespace {

Eigen::Matrix3d skew(const Point3& v) {
  Eigen::Matrix3d m;
  m << 0, -v.z(), v.y(), v.z(), 0, -v.x(), -v.y(), v.x(), 0;
  return m;
}

Eigen::Matrix3d exp_so3(const Point3& w) {
  const double angle = w.norm();
  if (angle < 1e-14) return Eigen::Matrix3d::Identity();
  return Eigen::AngleAxisd(angle, w / angle).toRotationMatrix();
}

// One scalar constraint: signed distance e with gradient g = de/dq at the
// moved point q, plus the Jacobian of q w.r.t. the 6 pose parameters.
struct NormalEquations {
  Eigen::Matrix<double, 6, 6> h = Eigen::Matrix<double, 6, 6>::Zero();
  Eigen::Matrix<double, 6, 1> b = Eigen::Matrix<double, 6, 1>::Zero();
  double cost = 0.0;
  int count = 0;

  void add(const Eigen::Matrix<double, 1, 6>& jac, double e) {
    h += jac.transpose() * jac;
    b += jac.transpose() * e;
    cost += e * e;
    ++count;
  }
};

// Point-to-line residual of q against the line through a and b.
// Returns false when the configuration is degenerate.
bool point_to_line(const Point3& q, const Point3& a, const Point3& b, double min_separation,
                   double* e, Eigen::Matrix<double, 1, 3>* grad) {
  const double len = (a - b).norm();
  if (len < min_separation) return false;
  const Point3 u = (q - a).cross(q - b);
  const double un = u.norm();
  *e = un / len;
  if (un < 1e-12) {
    grad->setZero();  // on the line: zero residual, no usable direction
    return true;
  }
  *grad = (u.transpose() * skew(b - a)) / (un * len);
  return true;
}

// Signed point-to-plane residual of q against the plane through a, b, c.
bool point_to_plane(const Point3& q, const Point3& a, const Point3& b, const Point3& c, double* e,
                    Eigen::Matrix<double, 1, 3>* grad) {
  const Point3 normal = (b - a).cross(c - a);
  const double nn = normal.norm();
  if (nn < 1e-9) return false;
  const Point3 unit = normal / nn;
  *e = unit.dot(q - a);
  *grad = unit.transpose();
  return true;
}

struct DampedSolver {
  double lambda = 1e-4;

  // Returns true and the update when a damped step can be computed.
  bool solve(const NormalEquations& eq, Eigen::Matrix<double, 6, 1>* delta) const {
    Eigen::Matrix<double, 6, 6> h = eq.h;
    for (int i = 0; i < 6; ++i) {
      h(i, i) += lambda * (eq.h(i, i) + 1e-9);
    }
    *delta = h.ldlt().solve(-eq.b);
    return delta->allFinite();
  }
};

}  // namespace

RigidTransform estimate_motion(const FeatureSet& prev, const FeatureSet& curr,
                               const RigidTransform& initial_guess, const MotionConfig& cfg) {
  if (prev.edge_points.size() < 2 || prev.planar_points.size() < 3) {
    throw UnderConstrainedError("estimate_motion: previous feature set too small");
  }

  const SpatialIndex edge_index(prev.edge_points);
  const SpatialIndex planar_index(prev.planar_points);
  const auto& edge_rings = prev.edge_points.rings;
  const auto& planar_rings = prev.planar_points.rings;
  auto ring_of = [](const std::vector<int>& rings, int idx) {
    return rings.empty() ? 0 : rings[static_cast<std::size_t>(idx)];
  };

  RigidTransform t = initial_guess;
  DampedSolver solver;

  // Assembles residuals for the given estimate; counts valid correspondences.
  auto assemble = [&](const RigidTransform& est, NormalEquations* eq) {
    for (std::size_t i = 0; i < curr.edge_points.size(); ++i) {
      const Point3& p = curr.edge_points.points[i];
      const Point3 q = est * p;
      const auto nn = edge_index.knn(q, 6);
      if (nn.empty() || nn[0].distance > cfg.max_correspondence_dist) continue;
      const int j = nn[0].index;
      if (!prev.edge_smoothness.empty() &&
          prev.edge_smoothness[static_cast<std::size_t>(j)] <= cfg.edge_threshold) {
        continue;  // smoothness re-check failed
      }
      // Second line point from a different ring so the pair spans the edge.
      int l = -1;
      for (std::size_t k = 1; k < nn.size(); ++k) {
        if (nn[k].distance > cfg.max_correspondence_dist) break;
        if (ring_of(edge_rings, nn[k].index) != ring_of(edge_rings, j)) {
          l = nn[k].index;
          break;
        }
      }
      if (l < 0) continue;
      if (!prev.edge_smoothness.empty() &&
          prev.edge_smoothness[static_cast<std::size_t>(l)] <= cfg.edge_threshold) {
        continue;
      }
      double e;
      Eigen::Matrix<double, 1, 3> grad;
      if (!point_to_line(q, edge_index.point(j), edge_index.point(l), cfg.min_pair_separation, &e,
                         &grad)) {
        continue;
      }
      if (std::abs(e) > cfg.max_residual) continue;
      Eigen::Matrix<double, 1, 6> jac;
      jac.leftCols<3>() = -grad * skew(est.rotation() * p);
      jac.rightCols<3>() = grad;
      eq->add(jac, e);
    }

    for (std::size_t i = 0; i < curr.planar_points.size(); ++i) {
      const Point3& p = curr.planar_points.points[i];
      const Point3 q = est * p;
      const auto nn = planar_index.knn(q, 6);
      if (nn.empty() || nn[0].distance > cfg.max_correspondence_dist) continue;
      const int j = nn[0].index;
      // Patch: nearest point, a same-ring companion and a different-ring
      // companion, so the triple is well-spread on the surface.
      int l = -1, m = -1;
      for (std::size_t k = 1; k < nn.size(); ++k) {
        if (nn[k].distance > cfg.max_correspondence_dist) break;
        const bool same_ring = ring_of(planar_rings, nn[k].index) == ring_of(planar_rings, j);
        if (same_ring && l < 0) l = nn[k].index;
        if (!same_ring && m < 0) m = nn[k].index;
        if (l >= 0 && m >= 0) break;
      }
      if (l < 0 || m < 0) continue;
      bool smooth_ok = true;
      for (int idx : {j, l, m}) {
        if (!prev.planar_smoothness.empty() &&
            prev.planar_smoothness[static_cast<std::size_t>(idx)] >= cfg.planar_threshold) {
          smooth_ok = false;
          break;
        }
      }
      if (!smooth_ok) continue;
      double e;
      Eigen::Matrix<double, 1, 3> grad;
      if (!point_to_plane(q, planar_index.point(j), planar_index.point(l), planar_index.point(m),
                          &e, &grad)) {
        continue;
      }
      if (std::abs(e) > cfg.max_residual) continue;
      Eigen::Matrix<double, 1, 6> jac;
      jac.leftCols<3>() = -grad * skew(est.rotation() * p);
      jac.rightCols<3>() = grad;
      eq->add(jac, e);
    }
  };

  for (int it = 0; it < cfg.max_iterations; ++it) {
    NormalEquations eq;
    assemble(t, &eq);
    if (it == 0 && eq.count < 6) {
      throw UnderConstrainedError("estimate_motion: only " + std::to_string(eq.count) +
                                  " valid correspondences");
    }
    if (eq.count < 6 || eq.b.norm() < 1e-14) break;

    bool accepted = false;
    for (int attempt = 0; attempt < 6; ++attempt) {
      Eigen::Matrix<double, 6, 1> delta;
      if (!solver.solve(eq, &delta)) {
        solver.lambda *= 10.0;
        continue;
      }
      const RigidTransform candidate(exp_so3(delta.head<3>()) * t.rotation(),
                                     t.translation() + delta.tail<3>());
      NormalEquations check;
      assemble(candidate, &check);
      if (check.count >= 6 && check.cost <= eq.cost) {
        t = candidate;
        solver.lambda = std::max(solver.lambda * 0.5, 1e-9);
        accepted = true;
        if (delta.norm() < cfg.update_tol) it = cfg.max_iterations;  // converged
        break;
      }
      solver.lambda *= 10.0;
    }
    if (!accepted) break;
  }

  return t;
}

RigidTransform refine_pose_against_map(const FeatureSet& features, const RigidTransform& pose,
                                       const SpatialIndex& map_index, const MapRefineConfig& cfg) {
  RigidTransform w = pose;
  DampedSolver solver;

  auto assemble = [&](const RigidTransform& est, NormalEquations* eq) {
    auto jacobian_for = [&](const Eigen::Matrix<double, 1, 3>& grad, const Point3& p_sensor) {
      // Right perturbation (sensor-local) keeps rotation well conditioned.
      Eigen::Matrix<double, 1, 6> jac;
      jac.leftCols<3>() = -(grad * est.rotation()) * skew(p_sensor);
      jac.rightCols<3>() = grad * est.rotation();
      return jac;
    };

    for (std::size_t i = 0; i < features.edge_points.size(); ++i) {
      const Point3& p = features.edge_points.points[i];
      const Point3 q = est * p;
      const auto nn = map_index.knn(q, cfg.neighbors);
      if (static_cast<int>(nn.size()) < cfg.neighbors ||
          nn.back().distance > cfg.max_correspondence_dist) {
        continue;
      }
      Point3 mean = Point3::Zero();
      for (const auto& h : nn) mean += map_index.point(h.index);
      mean /= static_cast<double>(nn.size());
      Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
      for (const auto& h : nn) {
        const Point3 d = map_index.point(h.index) - mean;
        cov += d * d.transpose();
      }
      Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(cov);
      if (eig.eigenvalues()(2) < cfg.line_ratio * eig.eigenvalues()(1)) continue;
      const Point3 dir = eig.eigenvectors().col(2);
      double e;
      Eigen::Matrix<double, 1, 3> grad;
      if (!point_to_line(q, mean + 0.1 * dir, mean - 0.1 * dir, 1e-6, &e, &grad)) continue;
      if (std::abs(e) > cfg.max_residual) continue;
      eq->add(jacobian_for(grad, p), e);
    }

    for (std::size_t i = 0; i < features.planar_points.size(); ++i) {
      const Point3& p = features.planar_points.points[i];
      const Point3 q = est * p;
      const auto nn = map_index.knn(q, cfg.neighbors);
      if (static_cast<int>(nn.size()) < cfg.neighbors ||
          nn.back().distance > cfg.max_correspondence_dist) {
        continue;
      }
      Point3 mean = Point3::Zero();
      for (const auto& h : nn) mean += map_index.point(h.index);
      mean /= static_cast<double>(nn.size());
      Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
      for (const auto& h : nn) {
        const Point3 d = map_index.point(h.index) - mean;
        cov += d * d.transpose();
      }
      Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(cov);
      const Point3 normal = eig.eigenvectors().col(0);
      bool planar = true;
      for (const auto& h : nn) {
        if (std::abs(normal.dot(map_index.point(h.index) - mean)) > cfg.plane_fit_tol) {
          planar = false;
          break;
        }
      }
      if (!planar) continue;
      const double e = normal.dot(q - mean);
      if (std::abs(e) > cfg.max_residual) continue;
      Eigen::Matrix<double, 1, 3> grad = normal.transpose();
      eq->add(jacobian_for(grad, p), e);
    }
  };

  for (int it = 0; it < cfg.max_iterations; ++it) {
    NormalEquations eq;
    assemble(w, &eq);
    if (eq.count < 6 || eq.b.norm() < 1e-14) break;

    bool accepted = false;
    for (int attempt = 0; attempt < 6; ++attempt) {
      Eigen::Matrix<double, 6, 1> delta;
      if (!solver.solve(eq, &delta)) {
        solver.lambda *= 10.0;
        continue;
      }
      const RigidTransform step(exp_so3(delta.head<3>()), delta.tail<3>());
      const RigidTransform candidate = w * step;
      NormalEquations check;
      assemble(candidate, &check);
      if (check.count >= 6 && check.cost <= eq.cost) {
        w = candidate;
        solver.lambda = std::max(solver.lambda * 0.5, 1e-9);
        accepted = true;
        if (delta.norm() < cfg.update_tol) it = cfg.max_iterations;
        break;
      }
      solver.lambda *= 10.0;
    }
    if (!accepted) break;
  }

  return w;
}

}  // namespace lolo
