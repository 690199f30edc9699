#include "lplab/report.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include <json.hpp>

namespace lplab {

namespace {

using nlohmann::json;

json results_json(const RunReport& report) {
  json body;
  body["schema_version"] = 1;
  body["environment"] = {{"version", kVersion}, {"float", "ieee754-binary64"}};
  // The echo drops execution-only parameters so the body is byte-identical
  // across thread counts.
  json config = json::parse(report.config_echo);
  config.erase("threads");
  body["config"] = config;
  json checks = json::array();
  for (const auto& r : report.results) {
    checks.push_back({{"suite", r.suite},
                      {"name", r.name},
                      {"entry", r.entry},
                      {"value", r.value},
                      {"ratio", r.ratio},
                      {"drift", r.drift},
                      {"status", r.status}});
  }
  body["checks"] = checks;
  return body;
}

}  // namespace

std::string report_body_json(const RunReport& report) {
  return results_json(report).dump(2) + "\n";
}

std::string report_full_json(const RunReport& report) {
  json full = results_json(report);
  json timing;
  for (const auto& [k, v] : report.timings_ms) timing[k] = v;
  full["timing"] = timing;
  return full.dump(2) + "\n";
}

std::vector<std::string> write_report(const RunReport& report, const std::string& out_dir,
                                      const std::vector<std::string>& formats) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) fail(Errc::io_failure, "cannot create output directory '" + out_dir + "'");

  std::vector<std::string> written;
  auto emit = [&](const std::string& name, const std::string& text) {
    const std::string path = (fs::path(out_dir) / name).string();
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(Errc::io_failure, "cannot write '" + path + "'");
    out << text;
    written.push_back(path);
  };

  for (const auto& fmt : formats) {
    if (fmt == "json") {
      emit("report.json", report_full_json(report));
    } else if (fmt == "csv") {
      std::string csv = "check,entry,value,ratio,drift,status\n";
      char row[256];
      for (const auto& r : report.results) {
        std::snprintf(row, sizeof row, ",%.12g,%.12g,%.12g,", r.value, r.ratio, r.drift);
        csv += r.suite + "/" + r.name + "," + r.entry + row + r.status + "\n";
      }
      emit("tables.csv", csv);
    } else {
      fail(Errc::config_invalid, "unknown report format '" + fmt + "'");
    }
  }
  return written;
}

void dump_field_binary(const std::string& path, const Eigen::MatrixXd& field) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(Errc::io_failure, "cannot write '" + path + "'");
  out.write("LPF1", 4);
  const std::uint32_t ndims = 2;
  out.write(reinterpret_cast<const char*>(&ndims), sizeof(ndims));
  const std::uint64_t dims[2] = {static_cast<std::uint64_t>(field.rows()),
                                 static_cast<std::uint64_t>(field.cols())};
  out.write(reinterpret_cast<const char*>(dims), sizeof(dims));
  for (Eigen::Index i = 0; i < field.rows(); ++i)
    for (Eigen::Index j = 0; j < field.cols(); ++j) {
      const double v = field(i, j);
      out.write(reinterpret_cast<const char*>(&v), sizeof(v));
    }
}

}  // namespace lplab
