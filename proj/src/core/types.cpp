#include "lolo/core/types.hpp"

namespace lolo {

void PointCloud::append(const PointCloud& other) {
  points.insert(points.end(), other.points.begin(), other.points.end());
  if (!rings.empty() || !other.rings.empty()) {
    if (rings.size() != points.size() - other.points.size() ||
        other.rings.size() != other.points.size()) {
      throw InvalidInputError("append: ring attribute present on only one side");
    }
    rings.insert(rings.end(), other.rings.begin(), other.rings.end());
  }
  if (!intensities.empty() || !other.intensities.empty()) {
    if (intensities.size() != points.size() - other.points.size() ||
        other.intensities.size() != other.points.size()) {
      throw InvalidInputError("append: intensity attribute present on only one side");
    }
    intensities.insert(intensities.end(), other.intensities.begin(), other.intensities.end());
  }
}

void PointCloud::validate() const {
  if (!rings.empty() && rings.size() != points.size()) {
    throw InvalidInputError("ring attribute length does not match point count");
  }
  if (!intensities.empty() && intensities.size() != points.size()) {
    throw InvalidInputError("intensity attribute length does not match point count");
  }
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!points[i].allFinite()) {
      throw InvalidInputError("non-finite coordinate at point " + std::to_string(i));
    }
  }
}

PointCloud transform_cloud(const PointCloud& cloud, const RigidTransform& t) {
  PointCloud out;
  out.points.reserve(cloud.size());
  for (const Point3& p : cloud.points) {
    out.points.push_back(t * p);
  }
  out.rings = cloud.rings;
  out.intensities = cloud.intensities;
  return out;
}

Point3 centroid(const PointCloud& cloud) {
  if (cloud.empty()) {
    throw InvalidInputError("centroid of empty cloud");
  }
  Point3 sum = Point3::Zero();
  for (const Point3& p : cloud.points) {
    sum += p;
  }
  return sum / static_cast<double>(cloud.size());
}

}  // namespace lolo
