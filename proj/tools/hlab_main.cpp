// Batch front door: parse a scenario + experiment config, run the
// verification suites, emit CSV reports.
//
// Exit codes: 0 ok, 1 violated verdict present, 2 config error,
// 3 scenario validation failure, 4 runtime error.

#include <CLI11.hpp>
#include <iostream>
#include <string>
#include <vector>

#include "hlab/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"harnack-lab: numerical checks for coupling-based semigroup inequalities"};

  std::string config_path;
  std::vector<std::string> overrides;
  hlab::RunOptions options;
  options.threads = 0;  // resolved below (flag, then env, then hardware)

  app.add_option("--config", config_path, "experiment configuration file (JSON)")
      ->required();
  app.add_option("--override", overrides,
                 "dotted.path=value applied to the config before parsing (repeatable)");
  app.add_option("--out", options.out_dir, "output directory (overrides config)");
  app.add_option("--threads", options.threads,
                 "worker pool size (default: HARNACK_LAB_THREADS or hardware)");
  app.add_flag("--verbose", options.verbose, "log experiment progress to stderr");

  CLI11_PARSE(app, argc, argv);

  const hlab::RunResult result = hlab::run_config_file(config_path, overrides, options);
  if (!result.message.empty()) std::cerr << "hlab: " << result.message << '\n';
  if (result.exit_code == hlab::kExitOk || result.exit_code == hlab::kExitViolated) {
    std::cout << "holds=" << result.holds << " violated=" << result.violated
              << " inconclusive=" << result.inconclusive << '\n';
  }
  return result.exit_code;
}
