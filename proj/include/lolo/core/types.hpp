#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "lolo/core/errors.hpp"

namespace lolo {

// Coordinates are meters in a right-handed frame: x forward, y left, z up.
using Point3 = Eigen::Vector3d;

/// Ordered collection of 3D points with optional per-point attributes.
///
/// Attribute vectors are either empty or exactly as long as `points`
/// (see `validate()`). `rings` holds the scan-line index of each point;
/// points of one ring are stored in acquisition (azimuth) order.
struct PointCloud {
  std::vector<Point3> points;
  std::vector<int> rings;
  std::vector<float> intensities;

  PointCloud() = default;
  explicit PointCloud(std::vector<Point3> pts) : points(std::move(pts)) {}

  std::size_t size() const { return points.size(); }
  bool empty() const { return points.empty(); }
  bool has_rings() const { return !rings.empty(); }
  bool has_intensities() const { return !intensities.empty(); }

  void reserve(std::size_t n) { points.reserve(n); }

  void add(const Point3& p) { points.push_back(p); }
  void add(double x, double y, double z) { points.emplace_back(x, y, z); }
  void add(const Point3& p, int ring) {
    points.push_back(p);
    rings.push_back(ring);
  }

  /// Appends all points (and matching attributes) of `other`.
  void append(const PointCloud& other);

  /// Throws InvalidInputError on length-mismatched attributes or
  /// non-finite coordinates.
  void validate() const;
};

/// SE(3) rigid motion: rotation matrix + translation vector.
///
/// Rotations are stored as 3x3 matrices internally; quaternions appear
/// only at file boundaries (trajectory I/O).
class RigidTransform {
 public:
  RigidTransform() : rotation_(Eigen::Matrix3d::Identity()), translation_(Point3::Zero()) {}
  RigidTransform(const Eigen::Matrix3d& rotation, const Point3& translation)
      : rotation_(rotation), translation_(translation) {}

  static RigidTransform identity() { return RigidTransform(); }

  static RigidTransform from_translation(const Point3& t) {
    return RigidTransform(Eigen::Matrix3d::Identity(), t);
  }

  static RigidTransform from_matrix(const Eigen::Matrix4d& m) {
    return RigidTransform(m.block<3, 3>(0, 0), m.block<3, 1>(0, 3));
  }

  static RigidTransform from_quaternion(const Eigen::Quaterniond& q, const Point3& t) {
    return RigidTransform(q.normalized().toRotationMatrix(), t);
  }

  /// Rotation about +z (yaw), then translation. Convenience for planar motion.
  static RigidTransform from_xyz_yaw(double x, double y, double z, double yaw) {
    return RigidTransform(Eigen::AngleAxisd(yaw, Point3::UnitZ()).toRotationMatrix(),
                          Point3(x, y, z));
  }

  const Eigen::Matrix3d& rotation() const { return rotation_; }
  const Point3& translation() const { return translation_; }

  Eigen::Matrix4d matrix() const {
    Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
    m.block<3, 3>(0, 0) = rotation_;
    m.block<3, 1>(0, 3) = translation_;
    return m;
  }

  Eigen::Quaterniond quaternion() const { return Eigen::Quaterniond(rotation_); }

  Point3 operator*(const Point3& p) const { return rotation_ * p + translation_; }

  /// Composition: (a * b)(p) == a(b(p)).
  RigidTransform operator*(const RigidTransform& other) const {
    return RigidTransform(rotation_ * other.rotation_,
                          rotation_ * other.translation_ + translation_);
  }

  RigidTransform inverse() const {
    Eigen::Matrix3d rt = rotation_.transpose();
    return RigidTransform(rt, -(rt * translation_));
  }

  /// Orthonormality check: R Rᵀ = I and det R = 1, elementwise within tol.
  bool is_valid(double tol = 1e-9) const {
    Eigen::Matrix3d err = rotation_ * rotation_.transpose() - Eigen::Matrix3d::Identity();
    return err.cwiseAbs().maxCoeff() <= tol && std::abs(rotation_.determinant() - 1.0) <= tol &&
           translation_.allFinite();
  }

 private:
  Eigen::Matrix3d rotation_;
  Point3 translation_;
};

/// Applies `t` to every point; attributes are carried over unchanged.
PointCloud transform_cloud(const PointCloud& cloud, const RigidTransform& t);

/// Arithmetic mean of the points. Throws InvalidInputError on an empty cloud.
Point3 centroid(const PointCloud& cloud);

}  // namespace lolo
