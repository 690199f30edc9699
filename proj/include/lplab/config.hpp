#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lplab/errors.hpp"

namespace lplab {

struct ModelConfig {
  std::string kind = "torus";  // torus | halfline
  std::size_t size = 64;
  double period = 32.0;
  double radius = 10.0;
  double bessel_lambda = 0.0;
  std::string model = "laplacian";  // laplacian | bessel | bessel-schrodinger
};

struct LadderConfig {
  int j_min = -4;
  int j_max = 8;
  std::size_t samples_per_octave = 4;
};

struct WeightConfig {
  std::string kind = "power";
  double a1 = 0.0;
  double a2 = 0.0;
};

struct ExponentsConfig {
  // covers the p < 1 quasi-norm branch and both sides of min(p, 2)
  std::vector<double> p = {0.5, 1.0, 2.0, 4.0};
  double lambda1 = 3.0, lambda2 = 3.0;    // g* exponents
  double lambda1p = 4.0, lambda2p = 4.0;  // Peetre exponents
};

struct CorpusConfig {
  std::vector<std::string> families = {"single-mode", "random-band", "bump", "mixture"};
  std::size_t count = 20;
  std::uint64_t seed = 1234;
  double band_lo = 0.35;
  double band_hi = 1.6;
};

struct ChecksConfig {
  bool identities = true;
  bool decay = false;
  bool partition = false;
  bool weights = false;
  bool theorem = false;
  bool inequalities = false;
  bool submean = false;
  bool refine = false;  // rerun grid-doubled suites and report drift
};

struct OutputConfig {
  std::string dir = "out";
  std::vector<std::string> formats = {"json"};
  bool dump_fields = false;
};

struct ExperimentConfig {
  int schema_version = 1;
  ModelConfig axis1, axis2;
  std::string profile1 = "lp-heat";
  std::string profile2 = "lp-heat";
  std::string comparison_profile1 = "lp-heat-2";
  std::string comparison_profile2 = "lp-heat-2";
  LadderConfig ladder;
  std::vector<WeightConfig> weights = {{"power", 0.0, 0.0}};
  ExponentsConfig exponents;
  CorpusConfig corpus;
  ChecksConfig checks;
  OutputConfig output;
  std::size_t threads = 2;
};

/// Parses and validates a config document; unknown keys and out-of-range
/// values raise Errc::config_invalid with the offending field in the message.
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::string& path);

/// Canonical JSON echo of a config (sorted keys, defaults filled in).
std::string config_to_json(const ExperimentConfig& config);

}  // namespace lplab
