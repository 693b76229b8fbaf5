#include "hlab/config.hpp"

#include <cmath>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "hlab/errors.hpp"

namespace hlab {

using nlohmann::json;

const char* to_string(ExperimentType t) {
  switch (t) {
    case ExperimentType::Validate: return "validate";
    case ExperimentType::Couple: return "couple";
    case ExperimentType::Harnack: return "harnack";
    case ExperimentType::LogHarnack: return "log_harnack";
    case ExperimentType::Girsanov: return "girsanov";
    case ExperimentType::StrongFeller: return "strong_feller";
    case ExperimentType::Invariant: return "invariant";
  }
  return "?";
}

namespace {

[[noreturn]] void bad(const std::string& what) { fail(ErrorCode::ConfigParse, what); }

const json& need(const json& j, const char* key, const char* context) {
  const auto it = j.find(key);
  if (it == j.end()) bad(std::string("missing '") + key + "' in " + context);
  return *it;
}

double as_number(const json& j, const char* what) {
  if (!j.is_number()) bad(std::string(what) + " must be a number");
  return j.get<double>();
}

Eigen::VectorXd as_vector(const json& j, const char* what) {
  if (!j.is_array() || j.empty()) bad(std::string(what) + " must be a nonempty array");
  Eigen::VectorXd v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = as_number(j[i], what);
  return v;
}

Eigen::MatrixXd as_matrix(const json& j, const char* what) {
  if (!j.is_array() || j.empty()) bad(std::string(what) + " must be a nonempty 2d array");
  const std::size_t rows = j.size();
  const std::size_t cols = j[0].is_array() ? j[0].size() : 0;
  if (cols == 0) bad(std::string(what) + " must be a 2d array");
  Eigen::MatrixXd m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    if (!j[i].is_array() || j[i].size() != cols) bad(std::string(what) + " rows ragged");
    for (std::size_t k = 0; k < cols; ++k)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) =
          as_number(j[i][k], what);
  }
  return m;
}

ConvexSet parse_set(const json& spec) {
  const std::string kind = need(spec, "kind", "set").get<std::string>();
  if (kind == "halfspace")
    return ConvexSet::halfspace(as_vector(need(spec, "normal", "halfspace"), "normal"),
                                as_number(need(spec, "offset", "halfspace"), "offset"));
  if (kind == "box")
    return ConvexSet::box(as_vector(need(spec, "lower", "box"), "lower"),
                          as_vector(need(spec, "upper", "box"), "upper"));
  if (kind == "ball")
    return ConvexSet::ball(as_vector(need(spec, "center", "ball"), "center"),
                           as_number(need(spec, "radius", "ball"), "radius"));
  bad("unknown set kind '" + kind + "'");
}

MonotoneOperator parse_operator(const json& spec) {
  const std::string kind = need(spec, "kind", "operator").get<std::string>();
  if (kind == "zero")
    return MonotoneOperator::zero(
        static_cast<int>(as_number(need(spec, "dim", "operator"), "dim")));
  if (kind == "normal_cone")
    return MonotoneOperator::normal_cone(parse_set(need(spec, "set", "operator")));
  if (kind == "linear_psd")
    return MonotoneOperator::linear_psd(
        as_matrix(need(spec, "matrix", "operator"), "matrix"));
  if (kind == "scaled_subgradient_abs")
    return MonotoneOperator::scaled_subgradient_abs(
        as_number(need(spec, "weight", "operator"), "weight"),
        static_cast<int>(as_number(need(spec, "dim", "operator"), "dim")));
  bad("unknown operator kind '" + kind + "'");
}

DriftSpec parse_drift(const json& spec) {
  const std::string kind = need(spec, "kind", "drift").get<std::string>();
  DriftSpec drift = [&] {
    if (kind == "linear")
      return DriftSpec::linear(as_matrix(need(spec, "matrix", "drift"), "matrix"));
    if (kind == "power_dissipative")
      return DriftSpec::power_dissipative(
          as_number(need(spec, "exponent", "drift"), "exponent"),
          as_number(need(spec, "gain", "drift"), "gain"),
          static_cast<int>(as_number(need(spec, "dim", "drift"), "dim")));
    if (kind == "affine")
      return DriftSpec::affine(as_matrix(need(spec, "matrix", "drift"), "matrix"),
                               as_vector(need(spec, "shift", "drift"), "shift"));
    bad("unknown drift kind '" + kind + "'");
  }();
  drift.with_constants(as_number(need(spec, "gamma", "drift"), "gamma"),
                       as_number(need(spec, "omega", "drift"), "omega"),
                       as_number(need(spec, "q", "drift"), "q"),
                       spec.contains("growth") ? as_number(spec["growth"], "growth")
                                               : 10.0);
  return drift;
}

ZetaSchedule parse_zeta(const json& spec) {
  const std::string kind = need(spec, "kind", "zeta").get<std::string>();
  if (kind == "constant")
    return ZetaSchedule::constant(as_number(need(spec, "value", "zeta"), "value"));
  if (kind == "piecewise_constant") {
    std::vector<double> breaks, values;
    for (const auto& b : need(spec, "breakpoints", "zeta")) breaks.push_back(as_number(b, "breakpoint"));
    for (const auto& v : need(spec, "values", "zeta")) values.push_back(as_number(v, "value"));
    return ZetaSchedule::piecewise_constant(std::move(breaks), std::move(values));
  }
  bad("unknown zeta kind '" + kind + "'");
}

}  // namespace

TestFunction parse_test_function(const json& spec) {
  const std::string kind = need(spec, "kind", "f").get<std::string>();
  if (kind == "exp_linear")
    return TestFunction::exp_linear(as_vector(need(spec, "lambda", "f"), "lambda"));
  if (kind == "smooth_indicator")
    return TestFunction::smooth_indicator(
        as_vector(need(spec, "center", "f"), "center"),
        as_number(need(spec, "radius", "f"), "radius"),
        as_number(need(spec, "width", "f"), "width"));
  if (kind == "shifted_logistic") {
    // f(x) = base + scale / (1 + exp(-(w.x - bias))), values in (base, base+scale)
    const Eigen::VectorXd w = as_vector(need(spec, "weights", "f"), "weights");
    const double bias = spec.contains("bias") ? as_number(spec["bias"], "bias") : 0.0;
    const double base = spec.contains("base") ? as_number(spec["base"], "base") : 1.0;
    const double scale = spec.contains("scale") ? as_number(spec["scale"], "scale") : 1.0;
    if (scale <= 0.0) bad("shifted_logistic scale must be positive");
    std::ostringstream id;
    id << "logistic_b" << base << "_s" << scale;
    return TestFunction::bounded_lipschitz(
        [w, bias, base, scale](const Eigen::VectorXd& x) {
          return base + scale / (1.0 + std::exp(-(w.dot(x) - bias)));
        },
        base + scale, base, scale * w.norm() / 4.0, id.str());
  }
  bad("unknown test function kind '" + kind + "'");
}

Scenario parse_scenario(const json& spec) {
  Scenario s;
  if (spec.contains("id")) s.id = spec["id"].get<std::string>();
  s.dim = static_cast<int>(as_number(need(spec, "dim", "scenario"), "dim"));
  s.op = parse_operator(need(spec, "operator", "scenario"));
  s.drift = parse_drift(need(spec, "drift", "scenario"));
  s.diffusion = DiffusionSpec(
      as_matrix(need(need(spec, "diffusion", "scenario"), "matrix", "diffusion"),
                "diffusion matrix"));
  s.c_sigma = spec.contains("c_sigma") ? as_number(spec["c_sigma"], "c_sigma")
                                       : s.diffusion.hs_norm();
  s.r = spec.contains("r") ? as_number(spec["r"], "r") : 0.0;
  s.lambda_embed =
      spec.contains("lambda_embed") ? as_number(spec["lambda_embed"], "lambda_embed") : 1.0;
  s.zeta = spec.contains("zeta") ? parse_zeta(spec["zeta"]) : ZetaSchedule::constant(1.0);
  s.check_shapes();
  return s;
}

namespace {

ExperimentSpec parse_experiment(const json& spec) {
  ExperimentSpec e;
  const std::string type = need(spec, "type", "experiment").get<std::string>();
  if (type == "validate") e.type = ExperimentType::Validate;
  else if (type == "couple") e.type = ExperimentType::Couple;
  else if (type == "harnack") e.type = ExperimentType::Harnack;
  else if (type == "log_harnack") e.type = ExperimentType::LogHarnack;
  else if (type == "girsanov") e.type = ExperimentType::Girsanov;
  else if (type == "strong_feller") e.type = ExperimentType::StrongFeller;
  else if (type == "invariant") e.type = ExperimentType::Invariant;
  else bad("unknown experiment type '" + type + "'");

  if (spec.contains("x")) e.x = as_vector(spec["x"], "x");
  if (spec.contains("y")) e.y = as_vector(spec["y"], "y");
  if (spec.contains("x0")) e.x0 = as_vector(spec["x0"], "x0");
  if (spec.contains("T")) e.T = as_number(spec["T"], "T");
  if (spec.contains("alpha")) e.alpha = as_number(spec["alpha"], "alpha");
  if (spec.contains("h")) e.h = as_number(spec["h"], "h");
  if (spec.contains("n_paths")) e.n_paths = spec["n_paths"].get<std::int64_t>();
  if (!spec.contains("seed")) bad("experiments must carry an explicit seed");
  e.seed = spec["seed"].get<std::uint64_t>();
  if (spec.contains("f")) e.f = parse_test_function(spec["f"]);
  if (spec.contains("mode")) {
    const std::string mode = spec["mode"].get<std::string>();
    if (mode == "singular_eta") e.mode = CouplingMode::SingularEta;
    else if (mode == "linear_xi") e.mode = CouplingMode::LinearXi;
    else bad("unknown coupling mode '" + mode + "'");
  }
  if (spec.contains("theta_scale")) e.theta_scale = as_number(spec["theta_scale"], "theta_scale");
  if (spec.contains("trace")) e.trace = spec["trace"].get<bool>();
  if (spec.contains("n_samples")) e.n_samples = spec["n_samples"].get<int>();
  if (spec.contains("radius")) e.radius = as_number(spec["radius"], "radius");
  if (spec.contains("burn_in")) e.burn_in = as_number(spec["burn_in"], "burn_in");
  if (spec.contains("horizon")) e.horizon = as_number(spec["horizon"], "horizon");
  if (spec.contains("stride")) e.stride = as_number(spec["stride"], "stride");
  if (spec.contains("moment_powers")) {
    e.moment_powers.clear();
    for (const auto& p : spec["moment_powers"]) e.moment_powers.push_back(as_number(p, "power"));
  }
  if (spec.contains("exp_theta")) e.exp_theta = as_number(spec["exp_theta"], "exp_theta");
  if (spec.contains("exp_power")) e.exp_power = as_number(spec["exp_power"], "exp_power");
  if (spec.contains("centers"))
    for (const auto& c : spec["centers"]) e.centers.push_back(as_vector(c, "center"));
  if (spec.contains("coverage_radius"))
    e.coverage_radius = as_number(spec["coverage_radius"], "coverage_radius");
  if (spec.contains("dump_samples")) e.dump_samples = spec["dump_samples"].get<bool>();
  return e;
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    bad(std::string("invalid JSON: ") + e.what());
  }
  try {
    ExperimentConfig config;
    config.scenario = parse_scenario(need(doc, "scenario", "config"));
    if (doc.contains("output")) config.output_dir = doc["output"].get<std::string>();
    if (doc.contains("experiments"))
      for (const auto& e : doc["experiments"]) config.experiments.push_back(parse_experiment(e));
    return config;
  } catch (const json::exception& e) {
    bad(std::string("malformed config: ") + e.what());
  }
}

void apply_override(json& doc, const std::string& key_value) {
  const auto eq = key_value.find('=');
  if (eq == std::string::npos || eq == 0)
    bad("override must look like dotted.path=value: " + key_value);
  const std::string path = key_value.substr(0, eq);
  const std::string raw = key_value.substr(eq + 1);

  json value;
  try {
    value = json::parse(raw);
  } catch (const json::exception&) {
    value = raw;  // unquoted strings pass through verbatim
  }

  json* node = &doc;
  std::istringstream keys(path);
  std::string key;
  std::vector<std::string> parts;
  while (std::getline(keys, key, '.')) parts.push_back(key);
  if (parts.empty()) bad("empty override path");
  for (std::size_t i = 0; i + 1 < parts.size(); ++i) node = &(*node)[parts[i]];
  (*node)[parts.back()] = value;
}

ExperimentConfig load_config(const std::string& path,
                             const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in) bad("cannot open config file: " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();

  json doc;
  try {
    doc = json::parse(buffer.str());
  } catch (const json::exception& e) {
    bad(std::string("invalid JSON: ") + e.what());
  }
  for (const auto& kv : overrides) apply_override(doc, kv);
  return parse_config(doc.dump());
}

}  // namespace hlab
