#pragma once

#include "lolo/pipeline/config.hpp"
#include "lolo/pipeline/report.hpp"
#include "lolo/pipeline/trajectory.hpp"

namespace lolo {

struct PipelineResult {
  std::vector<TrajectoryNode> trajectory;
  MatchReport report;
};

/// End-to-end run over in-memory scans: per scan, odometry advance (plus the
/// optional drift-bias contamination), local-map densification, and on the
/// localization cadence a relocalization attempt whose update feeds back
/// into both the trajectory and the local map. The node following a
/// successful attempt is flagged Corrected. Deterministic for a fixed
/// config. Scans must carry ring indices.
PipelineResult run_pipeline(const RunConfig& cfg, const std::vector<PointCloud>& scans,
                            const SegmentDatabase& db);

/// File-based variant: loads the database, parses each scan file (deriving
/// ring indices from the configured vertical model) and delegates. An
/// unreadable scan aborts with its index; requires at least 2 scans.
PipelineResult run_pipeline(const RunConfig& cfg,
                            const std::vector<std::filesystem::path>& scan_paths,
                            const std::filesystem::path& db_path);

}  // namespace lolo
