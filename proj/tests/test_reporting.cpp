#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>

#include <json.hpp>

#include "lplab/run.hpp"

using namespace lplab;

namespace {

const char* kMinimalConfig = R"({
  "schema_version": 1,
  "models": {
    "axis1": {"kind": "torus", "size": 32, "period": 32.0, "model": "laplacian"},
    "axis2": {"kind": "torus", "size": 32, "period": 32.0, "model": "laplacian"}
  },
  "profiles": {"axis1": "lp-heat", "axis2": "lp-heat"},
  "ladder": {"j_min": -3, "j_max": 6, "samples_per_octave": 2},
  "corpus": {"count": 6, "seed": 7},
  "checks": {"identities": true},
  "output": {"dir": "out", "formats": ["json"]}
})";

std::string temp_dir(const char* tag) {
  auto path = std::filesystem::temp_directory_path() / (std::string("lplab_test_") + tag);
  std::filesystem::remove_all(path);
  std::filesystem::create_directories(path);
  return path.string();
}

}  // namespace

TEST_CASE("config parsing accepts the minimal document") {
  const ExperimentConfig cfg = parse_config(kMinimalConfig);
  CHECK(cfg.axis1.size == 32);
  CHECK(cfg.profile1 == "lp-heat");
  CHECK(cfg.ladder.samples_per_octave == 2);
  CHECK(cfg.corpus.count == 6);
  CHECK(cfg.checks.identities);
  CHECK_FALSE(cfg.checks.decay);
}

TEST_CASE("unknown keys are rejected by name") {
  const char* bad = R"({"schema_version": 1, "modles": {}})";
  try {
    parse_config(bad);
    FAIL("expected a config error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::config_invalid);
    CHECK(std::string(e.what()).find("modles") != std::string::npos);
  }
}

TEST_CASE("invalid values are rejected with field diagnostics") {
  CHECK_THROWS_AS(parse_config("{invalid json"), Error);
  CHECK_THROWS_AS(parse_config(R"({"schema_version": 2})"), Error);
  CHECK_THROWS_AS(
      parse_config(R"({"schema_version":1,"ladder":{"j_min":5,"j_max":1}})"), Error);
  CHECK_THROWS_AS(
      parse_config(R"({"schema_version":1,"exponents":{"p":[-1.0]}})"), Error);
  CHECK_THROWS_AS(
      parse_config(R"({"schema_version":1,"corpus":{"families":["nonsense"]}})"), Error);
  CHECK_THROWS_AS(
      parse_config(R"({"schema_version":1,"output":{"formats":["yaml"]}})"), Error);
  // out-of-range numbers (including negatives smuggled into unsigned fields)
  CHECK_THROWS_AS(
      parse_config(R"({"schema_version":1,"models":{"axis1":{"size":-5}}})"), Error);
  CHECK_THROWS_AS(
      parse_config(R"({"schema_version":1,"models":{"axis1":{"size":100000}}})"), Error);
  CHECK_THROWS_AS(
      parse_config(R"({"schema_version":1,"corpus":{"band_lo":2.0,"band_hi":1.0}})"),
      Error);
}

TEST_CASE("config echo round-trips through the parser") {
  const ExperimentConfig cfg = parse_config(kMinimalConfig);
  const std::string echo = config_to_json(cfg);
  const ExperimentConfig back = parse_config(echo);
  CHECK(config_to_json(back) == echo);
}

TEST_CASE("minimal identities run: reproducible body, sane statuses") {
  ExperimentConfig cfg = parse_config(kMinimalConfig);
  cfg.threads = 2;
  const RunReport a = run_experiment(cfg);
  CHECK_FALSE(a.results.empty());
  CHECK_FALSE(a.hard_failure());
  for (const auto& r : a.results) CHECK(r.suite == "identities");

  // identical config + seed => byte-identical body, independent of threads
  ExperimentConfig cfg1 = cfg;
  cfg1.threads = 1;
  const RunReport b = run_experiment(cfg1);
  CHECK(report_body_json(a) == report_body_json(b));

  // the full report carries timing; the body must not
  CHECK(report_body_json(a).find("timing") == std::string::npos);
  CHECK(report_full_json(a).find("timing") != std::string::npos);
}

TEST_CASE("write_report emits the requested formats") {
  ExperimentConfig cfg = parse_config(kMinimalConfig);
  const RunReport rep = run_experiment(cfg);

  const std::string dir = temp_dir("formats");
  const auto json_only = write_report(rep, dir, {"json"});
  REQUIRE(json_only.size() == 1);
  CHECK(json_only[0].ends_with("report.json"));

  // JSON round-trips through a reference parser with no loss
  std::ifstream in(json_only[0]);
  nlohmann::json parsed = nlohmann::json::parse(in);
  CHECK(parsed.dump(2) + "\n" == report_full_json(rep));

  const auto both = write_report(rep, dir, {"json", "csv"});
  REQUIRE(both.size() == 2);
  std::ifstream csv(both[1]);
  std::string line;
  std::size_t rows = 0;
  std::getline(csv, line);
  CHECK(line == "check,entry,value,ratio,drift,status");
  while (std::getline(csv, line))
    if (!line.empty()) ++rows;
  CHECK(rows == rep.results.size());
}

TEST_CASE("binary field dumps carry the documented header") {
  const std::string dir = temp_dir("dump");
  Eigen::MatrixXd f(3, 5);
  for (Eigen::Index i = 0; i < 3; ++i)
    for (Eigen::Index j = 0; j < 5; ++j) f(i, j) = 10.0 * i + j;
  const std::string path = dir + "/field.bin";
  dump_field_binary(path, f);

  std::ifstream in(path, std::ios::binary);
  char magic[4];
  in.read(magic, 4);
  CHECK(std::string(magic, 4) == "LPF1");
  std::uint32_t ndims = 0;
  in.read(reinterpret_cast<char*>(&ndims), sizeof ndims);
  CHECK(ndims == 2);
  std::uint64_t dims[2];
  in.read(reinterpret_cast<char*>(dims), sizeof dims);
  CHECK(dims[0] == 3);
  CHECK(dims[1] == 5);
  double v = 0;
  in.read(reinterpret_cast<char*>(&v), sizeof v);
  CHECK(v == 0.0);
  in.read(reinterpret_cast<char*>(&v), sizeof v);
  CHECK(v == 1.0);  // row-major: (0,1) follows (0,0)
}

TEST_CASE("execute_and_write produces dumps when asked") {
  ExperimentConfig cfg = parse_config(kMinimalConfig);
  cfg.output.dir = temp_dir("exec");
  cfg.output.dump_fields = true;
  const auto files = execute_and_write(cfg);
  bool has_dump = false;
  for (const auto& f : files)
    if (f.find("field_g_entry0.bin") != std::string::npos) has_dump = true;
  CHECK(has_dump);
}

TEST_CASE("full suite smoke run covers every orchestrated check") {
  const char* text = R"({
    "schema_version": 1,
    "models": {
      "axis1": {"kind": "torus", "size": 32, "period": 32.0, "model": "laplacian"},
      "axis2": {"kind": "torus", "size": 32, "period": 32.0, "model": "laplacian"}
    },
    "profiles": {"axis1": "lp-heat", "axis2": "lp-heat",
                 "comparison1": "lp-heat-2", "comparison2": "lp-heat-2"},
    "ladder": {"j_min": -3, "j_max": 6, "samples_per_octave": 1},
    "weights": [{"kind": "power", "a1": 0.0, "a2": 0.0},
                {"kind": "power", "a1": 0.5, "a2": 0.5}],
    "exponents": {"p": [1.0, 2.0], "lambda1": 8.0, "lambda2": 8.0,
                  "lambda1_prime": 4.0, "lambda2_prime": 4.0},
    "corpus": {"count": 4, "seed": 5},
    "checks": {"identities": true, "decay": true, "partition": true, "weights": true,
               "theorem": true, "inequalities": true, "submean": true},
    "output": {"dir": "out", "formats": ["json"]}
  })";
  const ExperimentConfig cfg = parse_config(text);
  const RunReport rep = run_experiment(cfg);
  CHECK_FALSE(rep.hard_failure());
  std::set<std::string> suites;
  for (const auto& r : rep.results) suites.insert(r.suite);
  for (const char* s : {"identities", "decay", "partition", "weights", "theorem",
                        "inequalities", "submean"})
    CHECK(suites.contains(s));
  // the theorem suite flags (not fails) when hypotheses are violated
  for (const auto& r : rep.results)
    CHECK((r.status == "pass" || r.status == "flag" || r.status == "info"));
}

TEST_CASE("theorem refinement drift is reported when requested") {
  const char* text = R"({
    "schema_version": 1,
    "models": {
      "axis1": {"kind": "torus", "size": 24, "period": 32.0, "model": "laplacian"},
      "axis2": {"kind": "torus", "size": 24, "period": 32.0, "model": "laplacian"}
    },
    "ladder": {"j_min": -2, "j_max": 5, "samples_per_octave": 1},
    "exponents": {"p": [2.0], "lambda1": 8.0, "lambda2": 8.0,
                  "lambda1_prime": 4.0, "lambda2_prime": 4.0},
    "corpus": {"count": 3, "seed": 5},
    "checks": {"identities": false, "theorem": true, "refine": true}
  })";
  const RunReport rep = run_experiment(parse_config(text));
  bool saw_drift = false;
  for (const auto& r : rep.results)
    if (r.suite == "theorem" && r.name != "hypotheses_satisfied" && r.drift > 0.0)
      saw_drift = true;
  CHECK(saw_drift);
}
