#pragma once

#include "lolo/core/types.hpp"

namespace lolo {

/// Shape descriptor of a segment: [linearity, planarity, scattering,
/// omnivariance, anisotropy, eigenentropy, curvature change].
using Descriptor = Eigen::Matrix<double, 7, 1>;

/// Computes the 7 eigenvalue shape features from the covariance of the
/// points about their centroid, with eigenvalues l1 >= l2 >= l3 >= 0
/// normalized to e_i = l_i / (l1 + l2 + l3):
///
///   linearity        (e1 - e2) / e1
///   planarity        (e2 - e3) / e1
///   scattering       e3 / e1
///   omnivariance     (e1 e2 e3)^(1/3)
///   anisotropy       (e1 - e3) / e1
///   eigenentropy     -sum e_i ln e_i   (terms with e_i = 0 contribute 0)
///   curvature change e3 / (e1 + e2 + e3)
///
/// Negative eigenvalues from numerical noise are clamped to 0. Throws
/// InsufficientDataError for < 3 points and DegenerateGeometryError when
/// the covariance vanishes (all points coincident).
Descriptor describe_eigen(const PointCloud& segment_points);

}  // namespace lolo
