#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace lolo {

/// One localization attempt in the match report.
struct MatchReportRow {
  int scan = 0;
  int candidates = 0;
  int filtered_out = 0;
  int accepted = 0;
  bool success = false;
  double residual_m = 0.0;  // 0 on failed attempts
};

struct MatchReportTotals {
  long candidates = 0;
  long filtered_out = 0;
  long accepted = 0;
  long successes = 0;
  double residual_m = 0.0;  // column sum
};

/// Per-attempt rows plus run totals; totals always equal the column sums.
struct MatchReport {
  std::vector<MatchReportRow> rows;

  MatchReportTotals totals() const;

  /// CSV with the configuration echoed as '# ' comment lines, a
  /// `scan,candidates,filtered_out,accepted,success,residual_m` header, one
  /// row per attempt and a trailing totals line.
  void write_csv(const std::filesystem::path& path, const std::string& config_echo) const;
};

}  // namespace lolo
