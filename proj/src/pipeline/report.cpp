#include "lolo/pipeline/report.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "lolo/core/errors.hpp"

namespace lolo {

namespace {

std::string shortest(double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace

MatchReportTotals MatchReport::totals() const {
  MatchReportTotals t;
  for (const MatchReportRow& r : rows) {
    t.candidates += r.candidates;
    t.filtered_out += r.filtered_out;
    t.accepted += r.accepted;
    t.successes += r.success ? 1 : 0;
    t.residual_m += r.residual_m;
  }
  return t;
}

void MatchReport::write_csv(const std::filesystem::path& path,
                            const std::string& config_echo) const {
  std::ofstream os(path);
  if (!os) {
    throw IoError("cannot open " + path.string() + " for writing");
  }
  std::istringstream echo(config_echo);
  std::string line;
  while (std::getline(echo, line)) {
    os << "# " << line << "\n";
  }
  os << "scan,candidates,filtered_out,accepted,success,residual_m\n";
  for (const MatchReportRow& r : rows) {
    os << r.scan << ',' << r.candidates << ',' << r.filtered_out << ',' << r.accepted << ','
       << (r.success ? 1 : 0) << ',' << shortest(r.residual_m) << "\n";
  }
  const MatchReportTotals t = totals();
  os << "total," << t.candidates << ',' << t.filtered_out << ',' << t.accepted << ','
     << t.successes << ',' << shortest(t.residual_m) << "\n";
  if (!os) {
    throw IoError("write failed for " + path.string());
  }
}

}  // namespace lolo
