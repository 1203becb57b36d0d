#include "lolo/pipeline/runner.hpp"

#include <iostream>

#include "lolo/core/voxel_grid.hpp"
#include "lolo/pipeline/scan_io.hpp"

namespace lolo {

PipelineResult run_pipeline(const RunConfig& cfg, const std::vector<PointCloud>& scans,
                            const SegmentDatabase& db) {
  if (scans.size() < 2) {
    throw InvalidInputError("run_pipeline: need at least 2 scans");
  }
  if (db.size() == 0) {
    throw InvalidInputError("run_pipeline: segment database is empty");
  }

  OdometryState odometry(cfg.odometry_config());
  LocalMap local_map(cfg.local_map_scans);
  const LocalizationConfig loc_cfg = cfg.localization_config();
  const Point3 bias = cfg.drift_bias();
  const bool biased = bias.squaredNorm() > 0.0;

  PipelineResult result;
  result.trajectory.reserve(scans.size());

  for (std::size_t i = 0; i < scans.size(); ++i) {
    odometry.advance(scans[i]);
    if (biased && i > 0) {
      // Harness hook: contaminate the odometry like an uncorrected drift.
      odometry.apply_correction(RigidTransform::from_translation(bias));
    }

    // Local map stores the voxel-filtered scan with its odometry pose.
    local_map.add(voxel_downsample(scans[i], VoxelGridSpec{cfg.seg_voxel_leaf_m, Point3::Zero()}),
                  odometry.pose());

    TrajectoryNode node;
    node.timestamp = static_cast<double>(i) * cfg.scan_period_s;
    node.source = TrajectoryNode::Source::Odometry;

    if (cfg.localize_every > 0 && i > 0 && i % static_cast<std::size_t>(cfg.localize_every) == 0) {
      const LocalizationAttempt attempt = localize(local_map, db, odometry.pose(), loc_cfg);
      MatchReportRow row;
      row.scan = static_cast<int>(i);
      row.candidates = attempt.candidates;
      row.filtered_out = attempt.filtered_out;
      row.accepted = attempt.accepted;
      row.success = attempt.success;
      row.residual_m = attempt.residual;
      result.report.rows.push_back(row);
      std::clog << "localize scan=" << i << " success=" << attempt.success
                << " timings_ms seg=" << attempt.segmentation_ms
                << " desc=" << attempt.description_ms << " match=" << attempt.matching_ms
                << " ransac=" << attempt.ransac_ms << " icp=" << attempt.icp_ms << "\n";
      if (attempt.success) {
        odometry.apply_correction(attempt.update->update);
        local_map.apply_correction(attempt.update->update);
        node.source = TrajectoryNode::Source::Corrected;
      }
    }

    node.pose = odometry.pose();
    result.trajectory.push_back(node);
  }

  return result;
}

PipelineResult run_pipeline(const RunConfig& cfg,
                            const std::vector<std::filesystem::path>& scan_paths,
                            const std::filesystem::path& db_path) {
  const SegmentDatabase db = SegmentDatabase::load(db_path);
  if (scan_paths.size() < 2) {
    throw InvalidInputError("run_pipeline: need at least 2 scans");
  }
  std::vector<PointCloud> scans;
  scans.reserve(scan_paths.size());
  for (std::size_t i = 0; i < scan_paths.size(); ++i) {
    try {
      PointCloud scan = parse_scan_file(scan_paths[i], scan_format_from_extension(scan_paths[i]));
      assign_rings(scan, cfg.scan_rings, cfg.vfov_min_deg, cfg.vfov_max_deg);
      scans.push_back(std::move(scan));
    } catch (const Error& e) {
      throw Error("scan " + std::to_string(i) + " (" + scan_paths[i].string() +
                  "): " + e.what());
    }
  }
  return run_pipeline(cfg, scans, db);
}

}  // namespace lolo
