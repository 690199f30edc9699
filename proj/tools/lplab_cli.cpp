// CLI front end; all behavior goes through the shared-library C API.
#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lplab.h"

int main(int argc, char** argv) {
  CLI::App app{"Product Littlewood-Paley square-function laboratory"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Run the experiment suites from a config file");
  std::string config_path, out_dir, formats;
  int threads = 0;
  std::uint64_t seed = 0;
  bool has_seed = false;
  run->add_option("--config", config_path, "Experiment config (JSON)")->required();
  run->add_option("--out", out_dir, "Output directory (overrides config)");
  run->add_option("--format", formats, "Comma-separated formats: json,csv");
  run->add_option("--threads", threads, "Worker thread count");
  run->add_option("--seed", seed, "Corpus seed override")->each([&](const std::string&) {
    has_seed = true;
  });

  auto* validate = app.add_subcommand("validate", "Validate a config file and exit");
  std::string validate_path;
  validate->add_option("--config", validate_path, "Experiment config (JSON)")->required();

  auto* list = app.add_subcommand("list-builtins", "List built-in profiles and models");

  CLI11_PARSE(app, argc, argv);

  if (list->parsed()) {
    char buffer[1024];
    if (lplab_list_builtins(buffer, sizeof buffer) != LPLAB_OK) {
      std::cerr << "error: " << lplab_last_error() << "\n";
      return 1;
    }
    std::cout << buffer;
    return 0;
  }

  if (validate->parsed()) {
    if (lplab_validate_config_file(validate_path.c_str()) != LPLAB_OK) {
      std::cerr << "config invalid: " << lplab_last_error() << "\n";
      return 1;
    }
    std::cout << "config ok\n";
    return 0;
  }

  int hard_failure = 0;
  const lplab_status status = lplab_run_config_file(
      config_path.c_str(), out_dir.empty() ? nullptr : out_dir.c_str(),
      formats.empty() ? nullptr : formats.c_str(), threads, has_seed ? 1 : 0, seed,
      &hard_failure);
  if (status == LPLAB_ERR_CONFIG || status == LPLAB_ERR_IO) {
    std::cerr << "config error: " << lplab_last_error() << "\n";
    return 1;
  }
  if (status != LPLAB_OK) {
    std::cerr << "error: " << lplab_last_error() << "\n";
    return 2;
  }
  if (hard_failure) {
    std::cerr << "one or more checks failed hard\n";
    return 2;
  }
  return 0;
}
