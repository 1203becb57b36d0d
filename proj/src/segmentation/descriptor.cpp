#include "lolo/segmentation/descriptor.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

namespace lolo {

Descriptor describe_eigen(const PointCloud& segment_points) {
  const std::size_t n = segment_points.size();
  if (n < 3) {
    throw InsufficientDataError("describe_eigen: need at least 3 points");
  }

  const Point3 mean = centroid(segment_points);
  Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
  for (const Point3& p : segment_points.points) {
    const Point3 d = p - mean;
    cov += d * d.transpose();
  }
  cov /= static_cast<double>(n);

  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(cov);
  // Eigen reports ascending order; reindex to l1 >= l2 >= l3 and clamp noise.
  const double l1 = std::max(eig.eigenvalues()(2), 0.0);
  const double l2 = std::max(eig.eigenvalues()(1), 0.0);
  const double l3 = std::max(eig.eigenvalues()(0), 0.0);
  if (!(l1 > 0.0)) {
    throw DegenerateGeometryError("describe_eigen: zero-extent segment");
  }

  const double sum = l1 + l2 + l3;
  const double e1 = l1 / sum;
  const double e2 = l2 / sum;
  const double e3 = l3 / sum;

  auto entropy_term = [](double e) { return e > 0.0 ? -e * std::log(e) : 0.0; };

  Descriptor d;
  d(0) = (e1 - e2) / e1;
  d(1) = (e2 - e3) / e1;
  d(2) = e3 / e1;
  d(3) = std::cbrt(e1 * e2 * e3);
  d(4) = (e1 - e3) / e1;
  d(5) = entropy_term(e1) + entropy_term(e2) + entropy_term(e3);
  d(6) = e3 / (e1 + e2 + e3);
  return d;
}

}  // namespace lolo
