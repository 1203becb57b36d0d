#include "lolo/pipeline/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>

#include "lolo/pipeline/runner.hpp"
#include "lolo/pipeline/scan_io.hpp"
#include "lolo/pipeline/synth.hpp"

namespace lolo {

namespace {

ScanFormat parse_format_flag(const std::string& name) {
  if (name == "kitti-bin") return ScanFormat::KittiBin;
  if (name == "xyz-csv") return ScanFormat::XyzCsv;
  if (name == "ply-ascii") return ScanFormat::PlyAscii;
  throw InvalidParameterError("unknown scan format '" + name + "'");
}

int cmd_build_map(const std::string& map_file, const std::string& out,
                  const std::string& format_flag, const std::string& config_file) {
  RunConfig cfg;
  if (!config_file.empty()) cfg = RunConfig::from_file(config_file);
  const ScanFormat format =
      format_flag.empty() ? scan_format_from_extension(map_file) : parse_format_flag(format_flag);
  const PointCloud map = parse_scan_file(map_file, format);
  const SegmentDatabase db = SegmentDatabase::build(map, cfg.segmentation_config(),
                                                    cfg.to_string());
  db.save(out);
  std::cout << "built " << db.size() << " segments from " << map.size() << " points -> " << out
            << "\n";
  return 0;
}

int cmd_run(const std::string& config_file, const std::string& scans_dir, const std::string& db,
            const std::string& out_traj, const std::string& out_report) {
  const RunConfig cfg = RunConfig::from_file(config_file);
  std::vector<std::filesystem::path> scan_paths;
  for (const auto& entry : std::filesystem::directory_iterator(scans_dir)) {
    if (!entry.is_regular_file()) continue;
    const auto ext = entry.path().extension();
    if (ext == ".bin" || ext == ".csv" || ext == ".xyz" || ext == ".ply") {
      scan_paths.push_back(entry.path());
    }
  }
  std::sort(scan_paths.begin(), scan_paths.end());
  if (scan_paths.size() < 2) {
    throw InvalidInputError("run: found " + std::to_string(scan_paths.size()) +
                            " scans in " + scans_dir + ", need at least 2");
  }
  const PipelineResult result = run_pipeline(cfg, scan_paths, db);
  write_trajectory(result.trajectory, out_traj);
  result.report.write_csv(out_report, cfg.raw_text.empty() ? cfg.to_string() : cfg.raw_text);
  const MatchReportTotals t = result.report.totals();
  std::cout << "processed " << scan_paths.size() << " scans, " << result.report.rows.size()
            << " localization attempts, " << t.successes << " successful\n";
  return 0;
}

int cmd_eval(const std::string& traj_file, const std::string& gt_file, const std::string& out) {
  const auto traj = read_trajectory(traj_file);
  const auto gt = read_trajectory(gt_file);
  const AbsErrorStats stats = eval_abs_error(traj, gt);

  std::ofstream os(out);
  if (!os) {
    throw IoError("cannot open " + out + " for writing");
  }
  os << "timestamp,error_m\n";
  char buf[64];
  for (std::size_t i = 0; i < stats.per_node.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.6f,%.9f\n", stats.timestamps[i], stats.per_node[i]);
    os << buf;
  }
  std::snprintf(buf, sizeof(buf), "# mean_m = %.9f\n", stats.mean);
  os << buf;
  std::snprintf(buf, sizeof(buf), "# max_m = %.9f\n", stats.max);
  os << buf;
  for (std::size_t b = 0; b < stats.histogram.size(); ++b) {
    std::snprintf(buf, sizeof(buf), "# hist_%.1f_%.1f = %d\n", b * stats.bin_width,
                  (b + 1) * stats.bin_width, stats.histogram[b]);
    os << buf;
  }
  std::printf("nodes %zu mean_abs_error_m %.9f max_abs_error_m %.9f\n", stats.per_node.size(),
              stats.mean, stats.max);
  return 0;
}

int cmd_synth(std::uint64_t seed, const std::string& out_dir, int objects, int scans,
              double area) {
  SynthParams params;
  params.seed = seed;
  params.object_count = objects;
  params.scan_count = scans;
  params.area = area;
  const SynthScene scene = synth_scene(params);

  const std::filesystem::path dir(out_dir);
  std::filesystem::create_directories(dir / "scans");
  write_kitti_bin(dir / "map.bin", scene.target_map);
  for (std::size_t i = 0; i < scene.scans.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof(name), "scan_%05zu.bin", i);
    write_kitti_bin(dir / "scans" / name, scene.scans[i]);
  }
  write_trajectory(scene.ground_truth, dir / "ground_truth.txt");

  RunConfig cfg;
  cfg.scan_rings = params.lidar.rings;
  cfg.vfov_min_deg = params.lidar.vfov_min_deg;
  cfg.vfov_max_deg = params.lidar.vfov_max_deg;
  cfg.scan_period_s = params.scan_period;
  cfg.seg_cluster_radius_m = 0.35;
  std::ofstream os(dir / "config.cfg");
  os << "# generated alongside the synthetic scene (seed " << seed << ")\n" << cfg.to_string();

  std::cout << "wrote map (" << scene.target_map.size() << " points), " << scene.scans.size()
            << " scans and ground truth to " << out_dir << "\n";
  return 0;
}

}  // namespace

int cli(int argc, const char* const* argv) {
  CLI::App app{"Lidar-only odometry and localization toolkit"};
  app.require_subcommand(1);

  auto* build = app.add_subcommand("build-map", "Segment a target map into a database");
  std::string map_file, build_out, build_format, build_config;
  build->add_option("map-file", map_file, "target map point cloud")->required();
  build->add_option("--out", build_out, "output database path")->required();
  build->add_option("--format", build_format, "kitti-bin|xyz-csv|ply-ascii (default: by extension)");
  build->add_option("--config", build_config, "run configuration file");

  auto* run = app.add_subcommand("run", "Run odometry + localization over a scan directory");
  std::string run_config, scans_dir, run_db, out_traj, out_report;
  run->add_option("--config", run_config, "run configuration file")->required();
  run->add_option("--scans", scans_dir, "directory of scan files")->required();
  run->add_option("--db", run_db, "segment database")->required();
  run->add_option("--out-traj", out_traj, "output trajectory file")->required();
  run->add_option("--out-report", out_report, "output match report CSV")->required();

  auto* eval = app.add_subcommand("eval", "Absolute trajectory error against ground truth");
  std::string traj_file, gt_file, eval_out;
  eval->add_option("--traj", traj_file, "estimated trajectory")->required();
  eval->add_option("--gt", gt_file, "ground-truth trajectory")->required();
  eval->add_option("--out", eval_out, "per-node error CSV")->required();

  auto* synth = app.add_subcommand("synth", "Generate a synthetic scene");
  std::uint64_t seed = 1;
  std::string synth_out;
  int objects = 20, scan_count = 100;
  double area = 3600.0;
  synth->add_option("--seed", seed, "generator seed");
  synth->add_option("--out-dir", synth_out, "output directory")->required();
  synth->add_option("--objects", objects, "object count");
  synth->add_option("--scans", scan_count, "scan count");
  synth->add_option("--area", area, "town footprint in m^2");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;  // help exits 0, usage errors exit 1
  }

  try {
    if (build->parsed()) return cmd_build_map(map_file, build_out, build_format, build_config);
    if (run->parsed()) return cmd_run(run_config, scans_dir, run_db, out_traj, out_report);
    if (eval->parsed()) return cmd_eval(traj_file, gt_file, eval_out);
    if (synth->parsed()) return cmd_synth(seed, synth_out, objects, scan_count, area);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}

}  // namespace lolo
