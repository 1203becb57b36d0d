#include "lolo/pipeline/scan_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iostream>
#include <sstream>
#include <vector>

namespace lolo {

namespace {

double parse_field(const std::string& token, const char* what, std::size_t line) {
  double v = 0.0;
  const auto res = std::from_chars(token.data(), token.data() + token.size(), v);
  if (res.ec != std::errc{} || res.ptr != token.data() + token.size()) {
    throw ParseError(std::string("bad ") + what + " '" + token + "' at line " +
                     std::to_string(line));
  }
  return v;
}

PointCloud parse_kitti_bin(const std::filesystem::path& path, std::size_t* dropped) {
  std::ifstream is(path, std::ios::binary | std::ios::ate);
  if (!is) {
    throw IoError("cannot open " + path.string());
  }
  const std::streamoff size = is.tellg();
  if (size % 16 != 0) {
    throw ParseError(path.string() + ": length " + std::to_string(size) +
                     " is not a multiple of 16; record truncated at byte offset " +
                     std::to_string((size / 16) * 16));
  }
  is.seekg(0);
  std::vector<char> buffer(static_cast<std::size_t>(size));
  is.read(buffer.data(), size);
  if (!is) {
    throw IoError("read failed for " + path.string());
  }

  PointCloud cloud;
  const std::size_t n = static_cast<std::size_t>(size) / 16;
  cloud.reserve(n);
  cloud.intensities.reserve(n);
  std::size_t skipped = 0;
  for (std::size_t i = 0; i < n; ++i) {
    float record[4];
    std::memcpy(record, buffer.data() + i * 16, 16);
    if (!std::isfinite(record[0]) || !std::isfinite(record[1]) || !std::isfinite(record[2])) {
      ++skipped;
      continue;
    }
    cloud.add(record[0], record[1], record[2]);
    cloud.intensities.push_back(record[3]);
  }
  if (dropped) {
    *dropped = skipped;
  } else if (skipped > 0) {
    std::cerr << "warning: dropped " << skipped << " non-finite points from " << path.string()
              << "\n";
  }
  return cloud;
}

PointCloud parse_xyz_csv(const std::filesystem::path& path, std::size_t* dropped) {
  std::ifstream is(path);
  if (!is) {
    throw IoError("cannot open " + path.string());
  }
  PointCloud cloud;
  std::string line;
  std::size_t line_no = 0;
  std::size_t skipped = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    std::string fields[3];
    for (int i = 0; i < 3; ++i) {
      if (!std::getline(ss, fields[i], ',')) {
        throw ParseError(path.string() + ": expected x,y,z at line " + std::to_string(line_no));
      }
    }
    const double x = parse_field(fields[0], "x", line_no);
    const double y = parse_field(fields[1], "y", line_no);
    const double z = parse_field(fields[2], "z", line_no);
    if (!std::isfinite(x) || !std::isfinite(y) || !std::isfinite(z)) {
      ++skipped;
      continue;
    }
    cloud.add(x, y, z);
  }
  if (dropped) {
    *dropped = skipped;
  } else if (skipped > 0) {
    std::cerr << "warning: dropped " << skipped << " non-finite points from " << path.string()
              << "\n";
  }
  return cloud;
}

PointCloud parse_ply_ascii(const std::filesystem::path& path, std::size_t* dropped) {
  std::ifstream is(path);
  if (!is) {
    throw IoError("cannot open " + path.string());
  }
  std::string line;
  std::size_t line_no = 0;

  auto next_line = [&]() {
    if (!std::getline(is, line)) {
      throw ParseError(path.string() + ": unexpected end of header at line " +
                       std::to_string(line_no));
    }
    ++line_no;
  };

  next_line();
  if (line != "ply") {
    throw ParseError(path.string() + ": missing 'ply' magic at line 1");
  }
  next_line();
  if (line.rfind("format ascii", 0) != 0) {
    throw ParseError(path.string() + ": only ascii format is supported (line 2)");
  }

  long vertex_count = -1;
  std::vector<std::string> properties;
  bool in_vertex_element = false;
  for (;;) {
    next_line();
    if (line == "end_header") break;
    std::istringstream ss(line);
    std::string word;
    ss >> word;
    if (word == "comment") continue;
    if (word == "element") {
      std::string name;
      long count = 0;
      ss >> name >> count;
      in_vertex_element = (name == "vertex");
      if (in_vertex_element) vertex_count = count;
    } else if (word == "property" && in_vertex_element) {
      std::string type, name;
      ss >> type >> name;
      properties.push_back(name);
    }
  }
  if (vertex_count < 0) {
    throw ParseError(path.string() + ": header declares no vertex element");
  }
  int ix = -1, iy = -1, iz = -1;
  for (std::size_t i = 0; i < properties.size(); ++i) {
    if (properties[i] == "x") ix = static_cast<int>(i);
    if (properties[i] == "y") iy = static_cast<int>(i);
    if (properties[i] == "z") iz = static_cast<int>(i);
  }
  if (ix < 0 || iy < 0 || iz < 0) {
    throw ParseError(path.string() + ": vertex element lacks x/y/z properties");
  }

  PointCloud cloud;
  cloud.reserve(static_cast<std::size_t>(vertex_count));
  std::size_t skipped = 0;
  for (long v = 0; v < vertex_count; ++v) {
    if (!std::getline(is, line)) {
      throw ParseError(path.string() + ": vertex list truncated at line " +
                       std::to_string(line_no + 1));
    }
    ++line_no;
    std::istringstream ss(line);
    std::vector<std::string> tokens;
    std::string tok;
    while (ss >> tok) tokens.push_back(tok);
    if (tokens.size() < properties.size()) {
      throw ParseError(path.string() + ": short vertex row at line " + std::to_string(line_no));
    }
    const double x = parse_field(tokens[static_cast<std::size_t>(ix)], "x", line_no);
    const double y = parse_field(tokens[static_cast<std::size_t>(iy)], "y", line_no);
    const double z = parse_field(tokens[static_cast<std::size_t>(iz)], "z", line_no);
    if (!std::isfinite(x) || !std::isfinite(y) || !std::isfinite(z)) {
      ++skipped;
      continue;
    }
    cloud.add(x, y, z);
  }
  if (dropped) {
    *dropped = skipped;
  } else if (skipped > 0) {
    std::cerr << "warning: dropped " << skipped << " non-finite points from " << path.string()
              << "\n";
  }
  return cloud;
}

}  // namespace

ScanFormat scan_format_from_extension(const std::filesystem::path& path) {
  const std::string ext = path.extension().string();
  if (ext == ".bin") return ScanFormat::KittiBin;
  if (ext == ".csv" || ext == ".xyz") return ScanFormat::XyzCsv;
  if (ext == ".ply") return ScanFormat::PlyAscii;
  throw InvalidParameterError("cannot infer scan format from extension '" + ext + "'");
}

PointCloud parse_scan_file(const std::filesystem::path& path, ScanFormat format,
                           std::size_t* dropped) {
  switch (format) {
    case ScanFormat::KittiBin:
      return parse_kitti_bin(path, dropped);
    case ScanFormat::XyzCsv:
      return parse_xyz_csv(path, dropped);
    case ScanFormat::PlyAscii:
      return parse_ply_ascii(path, dropped);
  }
  throw InvalidParameterError("unknown scan format");
}

void write_kitti_bin(const std::filesystem::path& path, const PointCloud& cloud) {
  std::ofstream os(path, std::ios::binary);
  if (!os) {
    throw IoError("cannot open " + path.string() + " for writing");
  }
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const float record[4] = {
        static_cast<float>(cloud.points[i].x()), static_cast<float>(cloud.points[i].y()),
        static_cast<float>(cloud.points[i].z()),
        cloud.has_intensities() ? cloud.intensities[i] : 0.0f};
    os.write(reinterpret_cast<const char*>(record), sizeof(record));
  }
  if (!os) {
    throw IoError("write failed for " + path.string());
  }
}

void assign_rings(PointCloud& cloud, int rings, double vfov_min_deg, double vfov_max_deg) {
  if (rings < 1 || !(vfov_max_deg > vfov_min_deg)) {
    throw InvalidParameterError("assign_rings: need rings >= 1 and vfov_max > vfov_min");
  }
  cloud.rings.resize(cloud.size());
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const Point3& p = cloud.points[i];
    const double horiz = std::hypot(p.x(), p.y());
    const double elev_deg = std::atan2(p.z(), horiz) * 180.0 / M_PI;
    const double unit = (elev_deg - vfov_min_deg) / (vfov_max_deg - vfov_min_deg);
    const int ring = static_cast<int>(std::lround(unit * (rings - 1)));
    cloud.rings[i] = std::clamp(ring, 0, rings - 1);
  }
}

}  // namespace lolo
