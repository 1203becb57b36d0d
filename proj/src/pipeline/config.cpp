#include "lolo/pipeline/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace lolo {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return {};
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

struct Field {
  std::function<void(const std::string&, std::size_t)> set;
  std::function<std::string()> get;
};

template <typename T>
T parse_value(const std::string& text, std::size_t line);

template <>
double parse_value<double>(const std::string& text, std::size_t line) {
  double v = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
    throw ParseError("bad numeric value '" + text + "' at config line " + std::to_string(line));
  }
  return v;
}

template <>
int parse_value<int>(const std::string& text, std::size_t line) {
  int v = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
    throw ParseError("bad integer value '" + text + "' at config line " + std::to_string(line));
  }
  return v;
}

template <>
std::uint64_t parse_value<std::uint64_t>(const std::string& text, std::size_t line) {
  std::uint64_t v = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
    throw ParseError("bad unsigned value '" + text + "' at config line " + std::to_string(line));
  }
  return v;
}

template <>
bool parse_value<bool>(const std::string& text, std::size_t line) {
  if (text == "true" || text == "1") return true;
  if (text == "false" || text == "0") return false;
  throw ParseError("bad boolean value '" + text + "' at config line " + std::to_string(line));
}

template <typename T>
std::string render(const T& v) {
  if constexpr (std::is_same_v<T, bool>) {
    return v ? "true" : "false";
  } else {
    std::ostringstream ss;
    ss.precision(17);
    ss << v;
    return ss.str();
  }
}

std::map<std::string, Field> field_table(RunConfig& c) {
  std::map<std::string, Field> t;
  auto reg = [&t](const char* name, auto* member) {
    using T = std::remove_pointer_t<decltype(member)>;
    t[name] = Field{[member](const std::string& text, std::size_t line) {
                      *member = parse_value<T>(text, line);
                    },
                    [member] { return render(*member); }};
  };
  reg("odom_half_window", &c.odom_half_window);
  reg("odom_edge_threshold", &c.odom_edge_threshold);
  reg("odom_planar_threshold", &c.odom_planar_threshold);
  reg("odom_regions_per_line", &c.odom_regions_per_line);
  reg("odom_edge_quota", &c.odom_edge_quota);
  reg("odom_planar_quota", &c.odom_planar_quota);
  reg("odom_occlusion_gap_m", &c.odom_occlusion_gap_m);
  reg("odom_parallel_cos_max", &c.odom_parallel_cos_max);
  reg("odom_max_iterations", &c.odom_max_iterations);
  reg("odom_update_tol", &c.odom_update_tol);
  reg("odom_correspondence_dist_m", &c.odom_correspondence_dist_m);
  reg("map_refine_every", &c.map_refine_every);
  reg("map_feature_multiplier", &c.map_feature_multiplier);
  reg("map_max_iterations", &c.map_max_iterations);
  reg("map_voxel_leaf_m", &c.map_voxel_leaf_m);
  reg("map_retention_radius_m", &c.map_retention_radius_m);
  reg("map_correspondence_dist_m", &c.map_correspondence_dist_m);
  reg("seg_voxel_leaf_m", &c.seg_voxel_leaf_m);
  reg("seg_cluster_radius_m", &c.seg_cluster_radius_m);
  reg("seg_min_size", &c.seg_min_size);
  reg("seg_max_size", &c.seg_max_size);
  reg("seg_drop_ground", &c.seg_drop_ground);
  reg("seg_ground_min_z_m", &c.seg_ground_min_z_m);
  reg("gate_radius_m", &c.gate_radius_m);
  reg("knn", &c.knn);
  reg("max_descriptor_dist", &c.max_descriptor_dist);
  reg("max_offset_diff_m", &c.max_offset_diff_m);
  reg("min_cluster_size", &c.min_cluster_size);
  reg("ransac_inlier_tol_m", &c.ransac_inlier_tol_m);
  reg("ransac_max_iterations", &c.ransac_max_iterations);
  reg("rng_seed", &c.rng_seed);
  reg("local_map_scans", &c.local_map_scans);
  reg("localize_every", &c.localize_every);
  reg("icp_max_iterations", &c.icp_max_iterations);
  reg("icp_convergence_tol_m", &c.icp_convergence_tol_m);
  reg("icp_max_correspondence_dist_m", &c.icp_max_correspondence_dist_m);
  reg("scan_rings", &c.scan_rings);
  reg("vfov_min_deg", &c.vfov_min_deg);
  reg("vfov_max_deg", &c.vfov_max_deg);
  reg("scan_period_s", &c.scan_period_s);
  reg("drift_bias_x_m", &c.drift_bias_x_m);
  reg("drift_bias_y_m", &c.drift_bias_y_m);
  reg("drift_bias_z_m", &c.drift_bias_z_m);
  return t;
}

}  // namespace

RunConfig RunConfig::from_string(const std::string& text) {
  RunConfig cfg;
  auto fields = field_table(cfg);
  std::istringstream is(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ParseError("expected 'key = value' at config line " + std::to_string(line_no));
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto it = fields.find(key);
    if (it == fields.end()) {
      throw ParseError("unknown config key '" + key + "' at line " + std::to_string(line_no));
    }
    it->second.set(value, line_no);
  }
  cfg.raw_text = text;
  cfg.validate();
  return cfg;
}

RunConfig RunConfig::from_file(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) {
    throw IoError("cannot open config " + path.string());
  }
  std::ostringstream ss;
  ss << is.rdbuf();
  return from_string(ss.str());
}

void RunConfig::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw InvalidParameterError(std::string("config: ") + what);
  };
  require(odom_half_window >= 1, "odom_half_window must be >= 1");
  require(odom_edge_threshold > 0, "odom_edge_threshold must be positive");
  require(odom_planar_threshold > 0, "odom_planar_threshold must be positive");
  require(odom_planar_threshold < odom_edge_threshold,
          "odom_planar_threshold must be below odom_edge_threshold");
  require(odom_regions_per_line >= 1, "odom_regions_per_line must be >= 1");
  require(odom_edge_quota >= 1, "odom_edge_quota must be >= 1");
  require(odom_planar_quota >= 1, "odom_planar_quota must be >= 1");
  require(odom_occlusion_gap_m > 0, "odom_occlusion_gap_m must be positive");
  require(odom_parallel_cos_max > 0 && odom_parallel_cos_max <= 1,
          "odom_parallel_cos_max must be in (0, 1]");
  require(odom_max_iterations >= 1, "odom_max_iterations must be >= 1");
  require(odom_update_tol > 0, "odom_update_tol must be positive");
  require(odom_correspondence_dist_m > 0, "odom_correspondence_dist_m must be positive");
  require(map_refine_every >= 1, "map_refine_every must be >= 1");
  require(map_feature_multiplier >= 1, "map_feature_multiplier must be >= 1");
  require(map_max_iterations >= 1, "map_max_iterations must be >= 1");
  require(map_voxel_leaf_m > 0, "map_voxel_leaf_m must be positive");
  require(map_retention_radius_m > 0, "map_retention_radius_m must be positive");
  require(map_correspondence_dist_m > 0, "map_correspondence_dist_m must be positive");
  require(seg_voxel_leaf_m > 0, "seg_voxel_leaf_m must be positive");
  require(seg_cluster_radius_m > 0, "seg_cluster_radius_m must be positive");
  require(seg_min_size >= 1, "seg_min_size must be >= 1");
  require(seg_max_size >= seg_min_size, "seg_max_size must be >= seg_min_size");
  require(gate_radius_m > 0, "gate_radius_m must be positive");
  require(knn >= 1, "knn must be >= 1");
  require(max_descriptor_dist > 0, "max_descriptor_dist must be positive");
  require(max_offset_diff_m > 0, "max_offset_diff_m must be positive");
  require(min_cluster_size >= 2, "min_cluster_size must be >= 2");
  require(ransac_inlier_tol_m > 0, "ransac_inlier_tol_m must be positive");
  require(ransac_max_iterations >= 1, "ransac_max_iterations must be >= 1");
  require(local_map_scans >= 1, "local_map_scans must be >= 1");
  require(localize_every >= 0, "localize_every must be >= 0");
  require(icp_max_iterations >= 1, "icp_max_iterations must be >= 1");
  require(icp_convergence_tol_m > 0, "icp_convergence_tol_m must be positive");
  require(icp_max_correspondence_dist_m > 0, "icp_max_correspondence_dist_m must be positive");
  require(scan_rings >= 1, "scan_rings must be >= 1");
  require(vfov_max_deg > vfov_min_deg, "vfov_max_deg must exceed vfov_min_deg");
  require(scan_period_s > 0, "scan_period_s must be positive");
}

std::string RunConfig::to_string() const {
  RunConfig copy = *this;
  auto fields = field_table(copy);
  std::ostringstream ss;
  for (const auto& [key, field] : fields) {
    ss << key << " = " << field.get() << "\n";
  }
  return ss.str();
}

OdometryConfig RunConfig::odometry_config() const {
  OdometryConfig o;
  o.features.half_window = odom_half_window;
  o.features.edge_threshold = odom_edge_threshold;
  o.features.planar_threshold = odom_planar_threshold;
  o.features.regions_per_line = odom_regions_per_line;
  o.features.edge_quota_per_region = odom_edge_quota;
  o.features.planar_quota_per_region = odom_planar_quota;
  o.features.occlusion_gap = odom_occlusion_gap_m;
  o.features.parallel_cos_max = odom_parallel_cos_max;
  o.motion.max_iterations = odom_max_iterations;
  o.motion.update_tol = odom_update_tol;
  o.motion.max_correspondence_dist = odom_correspondence_dist_m;
  o.motion.edge_threshold = odom_edge_threshold;
  o.motion.planar_threshold = odom_planar_threshold;
  o.map_refine.max_iterations = map_max_iterations;
  o.map_refine.update_tol = odom_update_tol;
  o.map_refine.max_correspondence_dist = map_correspondence_dist_m;
  o.map_refine_every = map_refine_every;
  o.map_feature_multiplier = map_feature_multiplier;
  o.map_voxel_leaf = map_voxel_leaf_m;
  o.map_retention_radius = map_retention_radius_m;
  return o;
}

SegmentationConfig RunConfig::segmentation_config() const {
  SegmentationConfig s;
  s.voxel_leaf = seg_voxel_leaf_m;
  s.cluster_radius = seg_cluster_radius_m;
  s.min_segment_size = seg_min_size;
  s.max_segment_size = seg_max_size;
  s.drop_ground = seg_drop_ground;
  s.ground_min_z = seg_ground_min_z_m;
  return s;
}

LocalizationConfig RunConfig::localization_config() const {
  LocalizationConfig l;
  l.segmentation = segmentation_config();
  l.matching.gate_radius = gate_radius_m;
  l.matching.k_nn = knn;
  l.matching.max_descriptor_dist = max_descriptor_dist;
  l.max_offset_diff = max_offset_diff_m;
  l.ransac.min_cluster_size = min_cluster_size;
  l.ransac.inlier_tol = ransac_inlier_tol_m;
  l.ransac.max_iterations = ransac_max_iterations;
  l.ransac.rng_seed = rng_seed;
  l.icp.max_iterations = icp_max_iterations;
  l.icp.convergence_tol = icp_convergence_tol_m;
  l.icp.max_correspondence_dist = icp_max_correspondence_dist_m;
  return l;
}

}  // namespace lolo
