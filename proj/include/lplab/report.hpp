#pragma once

#include <Eigen/Dense>
#include <map>
#include <string>
#include <vector>

#include "lplab/config.hpp"

namespace lplab {

inline constexpr const char* kVersion = "0.1.0";

struct CheckResult {
  std::string suite;
  std::string name;
  std::string entry = "-";
  double value = 0.0;
  double ratio = 0.0;
  double drift = 0.0;
  std::string status = "info";  // pass | flag | fail | info
};

struct RunReport {
  std::string config_echo;  // canonical config JSON
  std::vector<CheckResult> results;
  std::vector<std::pair<std::string, double>> timings_ms;
  std::vector<std::pair<std::string, Eigen::MatrixXd>> field_dumps;

  bool hard_failure() const {
    for (const auto& r : results)
      if (r.status == "fail") return true;
    return false;
  }
};

/// Canonical report body (no timing block): sorted keys, LF, shortest
/// round-trip floats; byte-identical for identical config + seed.
std::string report_body_json(const RunReport& report);
std::string report_full_json(const RunReport& report);

/// Writes report.json and, when requested, tables.csv (+ plot-data CSVs).
/// Returns the written paths.
std::vector<std::string> write_report(const RunReport& report, const std::string& out_dir,
                                      const std::vector<std::string>& formats);

/// Flat binary field dump: magic "LPF1", u32 ndims, u64 dims[], f64 data,
/// row-major, little-endian.
void dump_field_binary(const std::string& path, const Eigen::MatrixXd& field);

}  // namespace lplab
