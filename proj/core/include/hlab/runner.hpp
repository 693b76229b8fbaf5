#pragma once

#include <string>
#include <vector>

#include "hlab/config.hpp"

namespace hlab {

/// Exit code contract of the batch runner.
enum ExitCode : int {
  kExitOk = 0,
  kExitViolated = 1,
  kExitConfigError = 2,
  kExitValidationFailure = 3,
  kExitRuntimeError = 4,
};

struct RunOptions {
  std::string out_dir;  // overrides the config's output directory when set
  int threads = 1;      // 0 -> default_thread_count()
  bool verbose = false;
};

struct RunResult {
  int exit_code = kExitOk;
  int holds = 0;
  int violated = 0;
  int inconclusive = 0;
  std::string message;
};

/// Executes the experiments in declared order, writing one CSV per
/// experiment type plus summary.csv (verdict counts) into the output
/// directory. Timestamps live in run_metadata.txt only, so re-running an
/// unchanged config reproduces every CSV byte for byte regardless of the
/// worker count. The scenario's hypothesis checks run first; a failure
/// aborts with kExitValidationFailure before any experiment starts.
RunResult run_config(const ExperimentConfig& config, const RunOptions& options);

/// Convenience wrapper: load, apply overrides, run. Configuration
/// problems return kExitConfigError instead of throwing.
RunResult run_config_file(const std::string& path, const std::vector<std::string>& overrides,
                          const RunOptions& options);

}  // namespace hlab
