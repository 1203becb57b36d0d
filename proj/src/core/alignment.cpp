#include "lolo/core/alignment.hpp"

#include <Eigen/SVD>

namespace lolo {

RigidTransform umeyama_align(std::span<const Point3> source, std::span<const Point3> target) {
  if (source.size() != target.size()) {
    throw InvalidInputError("umeyama_align: correspondence lists differ in length");
  }
  const std::size_t n = source.size();
  if (n < 3) {
    throw InsufficientDataError("umeyama_align: need at least 3 correspondence pairs");
  }

  Point3 src_mean = Point3::Zero();
  Point3 tgt_mean = Point3::Zero();
  for (std::size_t i = 0; i < n; ++i) {
    src_mean += source[i];
    tgt_mean += target[i];
  }
  src_mean /= static_cast<double>(n);
  tgt_mean /= static_cast<double>(n);

  Eigen::Matrix3d cross = Eigen::Matrix3d::Zero();
  Eigen::Matrix3d src_scatter = Eigen::Matrix3d::Zero();
  Eigen::Matrix3d tgt_scatter = Eigen::Matrix3d::Zero();
  for (std::size_t i = 0; i < n; ++i) {
    const Point3 s = source[i] - src_mean;
    const Point3 t = target[i] - tgt_mean;
    cross += s * t.transpose();
    src_scatter += s * s.transpose();
    tgt_scatter += t * t.transpose();
  }

  // Collinear (or coincident) points on either side leave the rotation
  // about the line unconstrained; refuse rather than return a
  // pseudo-solution.
  for (const Eigen::Matrix3d& scatter : {src_scatter, tgt_scatter}) {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> scatter_eig(scatter);
    const double lambda_max = scatter_eig.eigenvalues()(2);
    const double lambda_mid = scatter_eig.eigenvalues()(1);
    if (!(lambda_max > 0.0) || lambda_mid <= lambda_max * 1e-10) {
      throw DegenerateGeometryError("umeyama_align: rank-deficient point configuration");
    }
  }

  Eigen::JacobiSVD<Eigen::Matrix3d> svd(cross, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::Matrix3d d = Eigen::Matrix3d::Identity();
  if ((svd.matrixV() * svd.matrixU().transpose()).determinant() < 0.0) {
    d(2, 2) = -1.0;
  }
  const Eigen::Matrix3d rotation = svd.matrixV() * d * svd.matrixU().transpose();
  return RigidTransform(rotation, tgt_mean - rotation * src_mean);
}

}  // namespace lolo
