#pragma once

#include "lplab/config.hpp"
#include "lplab/report.hpp"

namespace lplab {

/// Executes every enabled suite; deterministic for a fixed config + seed.
RunReport run_experiment(const ExperimentConfig& config);

/// Runs and persists report + optional field dumps under config.output.dir.
/// Returns the written file paths.
std::vector<std::string> execute_and_write(const ExperimentConfig& config,
                                           RunReport* report_out = nullptr);

}  // namespace lplab
