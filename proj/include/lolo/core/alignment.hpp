#pragma once

#include <span>

#include "lolo/core/types.hpp"

namespace lolo {

/// Least-squares rigid alignment of positional correspondences
/// (source[i] <-> target[i]): returns the proper rigid transform T
/// minimizing sum_i ||T(source[i]) - target[i]||^2. No scale estimation.
///
/// Throws InvalidInputError on length mismatch, InsufficientDataError for
/// fewer than 3 pairs and DegenerateGeometryError when the source points
/// are (numerically) collinear.
RigidTransform umeyama_align(std::span<const Point3> source, std::span<const Point3> target);

}  // namespace lolo
