#pragma once

#include <filesystem>

#include "lolo/core/types.hpp"

namespace lolo {

enum class ScanFormat { KittiBin, XyzCsv, PlyAscii };

/// Maps .bin/.csv/.ply extensions to a format; throws InvalidParameterError
/// otherwise.
ScanFormat scan_format_from_extension(const std::filesystem::path& path);

/// Parses a point cloud file.
///
///   kitti-bin: little-endian float32 quadruples (x, y, z, intensity)
///   xyz-csv:   one "x,y,z" line per point
///   ply-ascii: standard header plus vertex list (x, y, z properties)
///
/// Points with non-finite coordinates are dropped; the count is reported
/// via `dropped` when given and warned to stderr otherwise. Malformed
/// content raises ParseError carrying the byte or line position.
PointCloud parse_scan_file(const std::filesystem::path& path, ScanFormat format,
                           std::size_t* dropped = nullptr);

/// Writes the kitti-bin encoding (bit-exact little-endian float32 x4;
/// missing intensities encode as 0).
void write_kitti_bin(const std::filesystem::path& path, const PointCloud& cloud);

/// Derives per-point scan-line indices from the vertical beam angle, for
/// formats that do not store them: rings split [vfov_min, vfov_max] into
/// `rings` equal elevation bins.
void assign_rings(PointCloud& cloud, int rings, double vfov_min_deg, double vfov_max_deg);

}  // namespace lolo
