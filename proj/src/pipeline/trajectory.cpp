#include "lolo/pipeline/trajectory.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

namespace lolo {

namespace {

// Shortest decimal form that round-trips the double exactly.
std::string shortest(double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& token, const std::filesystem::path& path, std::size_t line) {
  double value = 0.0;
  const auto res = std::from_chars(token.data(), token.data() + token.size(), value);
  if (res.ec != std::errc{} || res.ptr != token.data() + token.size()) {
    throw ParseError("bad number '" + token + "' at " + path.string() + ":" +
                     std::to_string(line));
  }
  return value;
}

}  // namespace

void write_trajectory(const std::vector<TrajectoryNode>& nodes,
                      const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) {
    throw IoError("cannot open " + path.string() + " for writing");
  }
  double prev_ts = -std::numeric_limits<double>::infinity();
  for (const TrajectoryNode& node : nodes) {
    if (!(node.timestamp > prev_ts)) {
      throw InvalidInputError("trajectory timestamps must be strictly increasing");
    }
    prev_ts = node.timestamp;
    if (!node.pose.is_valid(1e-6)) {
      throw InvalidInputError("trajectory pose rotation is not orthonormal");
    }
    Eigen::Quaterniond q = node.pose.quaternion().normalized();
    if (q.w() < 0.0) q.coeffs() = -q.coeffs();
    char ts[32];
    std::snprintf(ts, sizeof(ts), "%.6f", node.timestamp);
    const Point3& t = node.pose.translation();
    os << ts << ' ' << shortest(t.x()) << ' ' << shortest(t.y()) << ' ' << shortest(t.z()) << ' '
       << shortest(q.x()) << ' ' << shortest(q.y()) << ' ' << shortest(q.z()) << ' '
       << shortest(q.w()) << '\n';
  }
  if (!os) {
    throw IoError("write failed for " + path.string());
  }
}

std::vector<TrajectoryNode> read_trajectory(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) {
    throw IoError("cannot open " + path.string() + " for reading");
  }
  std::vector<TrajectoryNode> nodes;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    std::vector<std::string> tokens;
    std::string tok;
    while (ss >> tok) tokens.push_back(tok);
    if (tokens.size() != 8) {
      throw ParseError("expected 8 fields at " + path.string() + ":" + std::to_string(line_no));
    }
    TrajectoryNode node;
    node.timestamp = parse_double(tokens[0], path, line_no);
    const Point3 t(parse_double(tokens[1], path, line_no), parse_double(tokens[2], path, line_no),
                   parse_double(tokens[3], path, line_no));
    Eigen::Quaterniond q(parse_double(tokens[7], path, line_no),
                         parse_double(tokens[4], path, line_no),
                         parse_double(tokens[5], path, line_no),
                         parse_double(tokens[6], path, line_no));
    if (q.norm() < 1e-12) {
      throw ParseError("zero quaternion at " + path.string() + ":" + std::to_string(line_no));
    }
    node.pose = RigidTransform::from_quaternion(q, t);
    if (!nodes.empty() && !(node.timestamp > nodes.back().timestamp)) {
      throw ParseError("non-increasing timestamp at " + path.string() + ":" +
                       std::to_string(line_no));
    }
    nodes.push_back(node);
  }
  return nodes;
}

AbsErrorStats eval_abs_error(const std::vector<TrajectoryNode>& estimate,
                             const std::vector<TrajectoryNode>& ground_truth) {
  std::map<double, const TrajectoryNode*> gt_by_ts;
  for (const TrajectoryNode& n : ground_truth) gt_by_ts.emplace(n.timestamp, &n);

  AbsErrorStats stats;
  stats.timestamps.reserve(estimate.size());
  stats.per_node.reserve(estimate.size());
  double sum = 0.0;
  for (const TrajectoryNode& n : estimate) {
    const auto it = gt_by_ts.find(n.timestamp);
    if (it == gt_by_ts.end()) {
      char buf[32];
      std::snprintf(buf, sizeof(buf), "%.6f", n.timestamp);
      throw InvalidInputError(std::string("timestamp ") + buf + " missing from ground truth");
    }
    const double err = (n.pose.translation() - it->second->pose.translation()).norm();
    stats.timestamps.push_back(n.timestamp);
    stats.per_node.push_back(err);
    sum += err;
    stats.max = std::max(stats.max, err);
  }
  if (!stats.per_node.empty()) {
    stats.mean = sum / static_cast<double>(stats.per_node.size());
    stats.histogram.assign(static_cast<std::size_t>(std::floor(stats.max / stats.bin_width)) + 1,
                           0);
    for (double err : stats.per_node) {
      ++stats.histogram[static_cast<std::size_t>(std::floor(err / stats.bin_width))];
    }
  }
  return stats;
}

}  // namespace lolo
