#pragma once

#include <nlohmann/json_fwd.hpp>
#include <optional>
#include <string>
#include <vector>

#include "hlab/coupling.hpp"
#include "hlab/scenario.hpp"
#include "hlab/test_function.hpp"

namespace hlab {

enum class ExperimentType {
  Validate,
  Couple,
  Harnack,
  LogHarnack,
  Girsanov,
  StrongFeller,
  Invariant,
};

const char* to_string(ExperimentType t);

/// One experiment entry from the configuration file. Unused fields keep
/// their defaults; the runner reads only what each type needs.
struct ExperimentSpec {
  ExperimentType type = ExperimentType::Validate;
  Eigen::VectorXd x, y, x0;
  double T = 1.0;
  double alpha = 2.0;
  double h = 1e-3;
  std::int64_t n_paths = 1000;
  std::uint64_t seed = 0;
  std::optional<TestFunction> f;
  CouplingMode mode = CouplingMode::SingularEta;
  double theta_scale = 1.0;
  bool trace = false;

  // validate
  int n_samples = 10000;
  double radius = 10.0;

  // invariant
  double burn_in = 10.0;
  double horizon = 10000.0;
  double stride = 0.5;
  std::vector<double> moment_powers{1.0, 2.0};
  double exp_theta = 0.5;
  double exp_power = 2.0;
  std::vector<Eigen::VectorXd> centers;
  double coverage_radius = 0.25;
  bool dump_samples = false;
};

struct ExperimentConfig {
  Scenario scenario;
  std::vector<ExperimentSpec> experiments;
  std::string output_dir = "out";
};

/// Parses the JSON configuration text. Structural problems (bad JSON,
/// unknown kinds, shape mismatches) raise ConfigParse.
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::string& path,
                             const std::vector<std::string>& overrides = {});

/// Applies "dotted.path=value" overrides onto the raw JSON document
/// before any object construction, so an override that breaks an
/// invariant fails exactly as if it had been written in the file.
void apply_override(nlohmann::json& doc, const std::string& key_value);

/// Test-function spec shared by config parsing and programmatic callers.
TestFunction parse_test_function(const nlohmann::json& spec);

Scenario parse_scenario(const nlohmann::json& spec);

}  // namespace hlab
