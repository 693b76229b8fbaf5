#include "hlab/runner.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "hlab/bounds.hpp"
#include "hlab/errors.hpp"
#include "hlab/invariant.hpp"
#include "hlab/montecarlo.hpp"
#include "hlab/parallel.hpp"

namespace hlab {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt(const Eigen::VectorXd& v) {
  std::string out;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) out += ';';
    out += fmt(v[i]);
  }
  return out;
}

/// Accumulates one CSV per experiment type; files are written by the
/// runner thread only.
class ReportSink {
 public:
  explicit ReportSink(std::filesystem::path dir) : dir_(std::move(dir)) {}

  std::ostringstream& file(const std::string& name, const std::string& header) {
    auto [it, inserted] = buffers_.try_emplace(name);
    if (inserted) it->second << header << '\n';
    return it->second;
  }

  void write_text(const std::string& name, const std::string& text) {
    std::ofstream out(dir_ / name, std::ios::binary);
    out << text;
  }

  void flush() {
    for (const auto& [name, buffer] : buffers_) write_text(name, buffer.str());
  }

 private:
  std::filesystem::path dir_;
  std::map<std::string, std::ostringstream> buffers_;
};

struct VerdictCounts {
  int holds = 0, violated = 0, inconclusive = 0;

  void add(Verdict v) {
    switch (v) {
      case Verdict::Holds: ++holds; break;
      case Verdict::Violated: ++violated; break;
      case Verdict::Inconclusive: ++inconclusive; break;
    }
  }
  void add_pass(bool pass) { pass ? ++holds : ++violated; }
};

const TestFunction& require_f(const ExperimentSpec& e) {
  if (!e.f) fail(ErrorCode::ConfigParse,
                 std::string(to_string(e.type)) + " experiment needs a test function");
  return *e.f;
}

void run_validate(const Scenario& scn, const ExperimentSpec& e, ReportSink& sink,
                  VerdictCounts& counts) {
  const ValidationReport report = validate(scn, e.n_samples, e.radius, e.seed);
  auto& csv = sink.file("validate.csv", "scenario,hypothesis,pass,worst_slack,note");
  for (const auto& [name, check] : report.per_hypothesis) {
    csv << scn.id << ',' << name << ',' << (check.pass ? 1 : 0) << ','
        << fmt(check.worst_slack) << ',' << check.note << '\n';
    counts.add_pass(check.pass);
  }
}

void run_couple(const Scenario& scn, const ExperimentSpec& e, int index, int threads,
                ReportSink& sink, VerdictCounts& counts) {
  auto& csv = sink.file("couple.csv", "scenario,path,coupled,tau,n_t,qv_t,r_t");
  const auto n = static_cast<std::size_t>(e.n_paths);
  std::vector<CoupledSummary> results(n);
  CouplingOptions opt;
  opt.stop_after_coupling = true;  // tau and the frozen ledger are all we report
  parallel_for(threads, e.n_paths, [&](std::int64_t i) {
    results[static_cast<std::size_t>(i)] = simulate_coupled_summary(
        scn, e.x, e.y, e.T, e.h, NoiseStream(e.seed, static_cast<std::uint64_t>(i)),
        e.mode, opt);
  });
  std::int64_t coupled = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& s = results[i];
    coupled += s.coupled ? 1 : 0;
    csv << scn.id << ',' << i << ',' << (s.coupled ? 1 : 0) << ',' << fmt(s.tau) << ','
        << fmt(s.girsanov.n_t) << ',' << fmt(s.girsanov.qv_t) << ',' << fmt(s.girsanov.r())
        << '\n';
  }
  counts.add_pass(coupled == e.n_paths);

  if (e.trace) {
    const CoupledTrajectory t =
        simulate_coupled(scn, e.x, e.y, e.T, e.h, NoiseStream(e.seed, 0), e.mode);
    std::ostringstream trace;
    write_coupled_trace_csv(t, scn, trace);
    sink.write_text("couple_trace_" + std::to_string(index) + ".csv", trace.str());
    std::ostringstream xs, ys;
    write_path_csv(t.x_path, xs);
    write_path_csv(t.y_path, ys);
    sink.write_text("couple_xpath_" + std::to_string(index) + ".csv", xs.str());
    sink.write_text("couple_ypath_" + std::to_string(index) + ".csv", ys.str());
  }
}

void run_harnack(const Scenario& scn, const ExperimentSpec& e, int threads,
                 ReportSink& sink, VerdictCounts& counts) {
  MonteCarloOptions opt{threads};
  const HarnackReport rep = verify_harnack(scn, e.x, e.y, e.T, e.alpha, require_f(e),
                                           e.n_paths, e.h, e.seed, opt, e.theta_scale);
  auto& csv = sink.file("harnack.csv",
                        "scenario,x,y,T,alpha,f,lhs_log,rhs_log,slack,verdict,n,h,seed");
  csv << scn.id << ',' << fmt(e.x) << ',' << fmt(e.y) << ',' << fmt(e.T) << ','
      << fmt(e.alpha) << ',' << e.f->id() << ',' << fmt(rep.lhs_log) << ','
      << fmt(rep.rhs_log) << ',' << fmt(rep.slack) << ',' << to_string(rep.verdict) << ','
      << e.n_paths << ',' << fmt(e.h) << ',' << e.seed << '\n';
  counts.add(rep.verdict);
}

void run_log_harnack(const Scenario& scn, const ExperimentSpec& e, int threads,
                     ReportSink& sink, VerdictCounts& counts) {
  MonteCarloOptions opt{threads};
  const HarnackReport rep = verify_log_harnack(scn, e.x, e.y, e.T, require_f(e),
                                               e.n_paths, e.h, e.seed, opt, e.theta_scale);
  auto& csv = sink.file("log_harnack.csv",
                        "scenario,x,y,T,f,lhs_log,rhs_log,slack,verdict,n,h,seed");
  csv << scn.id << ',' << fmt(e.x) << ',' << fmt(e.y) << ',' << fmt(e.T) << ','
      << e.f->id() << ',' << fmt(rep.lhs_log) << ',' << fmt(rep.rhs_log) << ','
      << fmt(rep.slack) << ',' << to_string(rep.verdict) << ',' << e.n_paths << ','
      << fmt(e.h) << ',' << e.seed << '\n';
  counts.add(rep.verdict);
}

void run_girsanov(const Scenario& scn, const ExperimentSpec& e, int threads,
                  ReportSink& sink, VerdictCounts& counts) {
  MonteCarloOptions opt{threads};
  const GirsanovReport rep =
      verify_girsanov(scn, e.x, e.y, e.T, require_f(e), e.n_paths, e.h, e.seed, e.mode, opt);
  auto& csv = sink.file("girsanov.csv",
                        "scenario,x,y,T,f,mean_r,mean_r_se,transfer_lhs,transfer_rhs,"
                        "transfer_gap,coupled_fraction,pass,n,h,seed");
  csv << scn.id << ',' << fmt(e.x) << ',' << fmt(e.y) << ',' << fmt(e.T) << ','
      << e.f->id() << ',' << fmt(rep.mean_r.mean) << ',' << fmt(rep.mean_r.se) << ','
      << fmt(rep.transfer_lhs.mean) << ',' << fmt(rep.transfer_rhs.mean) << ','
      << fmt(rep.transfer_gap) << ',' << fmt(rep.coupled_fraction) << ','
      << (rep.pass ? 1 : 0) << ',' << e.n_paths << ',' << fmt(e.h) << ',' << e.seed << '\n';
  counts.add_pass(rep.pass);
}

void run_strong_feller(const Scenario& scn, const ExperimentSpec& e, int threads,
                       ReportSink& sink, VerdictCounts& counts) {
  MonteCarloOptions opt{threads};
  const StrongFellerReport rep =
      verify_strong_feller(scn, e.x, e.y, e.T, require_f(e), e.n_paths, e.h, e.seed, opt);
  auto& csv = sink.file("strong_feller.csv",
                        "scenario,x,y,T,f,lhs,lhs_se,rhs,pass,n,h,seed");
  csv << scn.id << ',' << fmt(e.x) << ',' << fmt(e.y) << ',' << fmt(e.T) << ','
      << e.f->id() << ',' << fmt(rep.lhs) << ',' << fmt(rep.lhs_diff.se) << ','
      << fmt(rep.rhs) << ',' << (rep.pass ? 1 : 0) << ',' << e.n_paths << ',' << fmt(e.h)
      << ',' << e.seed << '\n';
  counts.add_pass(rep.pass);
}

void run_invariant(const Scenario& scn, const ExperimentSpec& e, int index,
                   ReportSink& sink, VerdictCounts& counts) {
  const Eigen::VectorXd x0 = e.x0.size() ? e.x0 : Eigen::VectorXd::Zero(scn.dim);
  const EmpiricalMeasure measure =
      sample_invariant(scn, x0, e.burn_in, e.horizon, e.stride, e.h, e.seed);
  auto& csv = sink.file("invariant.csv", "scenario,metric,value,se,flag");
  for (double p : e.moment_powers) {
    const Estimate m = moment(measure, p);
    csv << scn.id << ",moment_p" << fmt(p) << ',' << fmt(m.mean) << ',' << fmt(m.se)
        << ",\n";
  }
  if (e.exp_theta > 0.0) {
    const ExpMomentEstimate em = exp_moment(measure, e.exp_theta, e.exp_power);
    csv << scn.id << ",exp_moment_t" << fmt(e.exp_theta) << "_p" << fmt(e.exp_power)
        << ',' << fmt(em.estimate.mean) << ',' << fmt(em.estimate.se) << ','
        << (em.unstable ? "unstable" : "stable") << '\n';
  }
  if (!e.centers.empty()) {
    const SupportCoverage cov = support_coverage(measure, e.centers, e.coverage_radius, scn);
    for (std::size_t i = 0; i < e.centers.size(); ++i)
      csv << scn.id << ",coverage_" << fmt(e.centers[i]) << ','
          << fmt(cov.hit_fraction[i]) << ",," << (cov.all_hit ? "all_hit" : "partial")
          << '\n';
    counts.add_pass(cov.all_hit);
  }
  if (e.dump_samples) {
    std::ostringstream dump;
    write_measure_csv(measure, dump);
    sink.write_text("invariant_samples_" + std::to_string(index) + ".csv", dump.str());
  }
}

}  // namespace

RunResult run_config(const ExperimentConfig& config, const RunOptions& options) {
  RunResult result;
  const std::string out_dir = options.out_dir.empty() ? config.output_dir : options.out_dir;
  const int threads = options.threads > 0 ? options.threads : default_thread_count();

  std::filesystem::create_directories(out_dir);
  ReportSink sink{std::filesystem::path(out_dir)};

  {
    const auto now = std::chrono::system_clock::now();
    std::ostringstream meta;
    meta << "started_unix_ms="
         << std::chrono::duration_cast<std::chrono::milliseconds>(now.time_since_epoch())
                .count()
         << "\nthreads=" << threads << "\nscenario=" << config.scenario.id << '\n';
    sink.write_text("run_metadata.txt", meta.str());
  }

  // Hypothesis gate: nothing runs against an invalid scenario.
  VerdictCounts counts;
  try {
    const ValidationReport gate = validate(config.scenario, 4000, 10.0, /*seed=*/0);
    if (!gate.pass) {
      auto& csv = sink.file("validate.csv", "scenario,hypothesis,pass,worst_slack,note");
      for (const auto& [name, check] : gate.per_hypothesis)
        csv << config.scenario.id << ',' << name << ',' << (check.pass ? 1 : 0) << ','
            << fmt(check.worst_slack) << ',' << check.note << '\n';
      sink.flush();
      result.exit_code = kExitValidationFailure;
      result.message = "scenario failed hypothesis validation";
      return result;
    }
  } catch (const LabError& e) {
    result.exit_code = kExitValidationFailure;
    result.message = e.what();
    return result;
  }

  try {
    int index = 0;
    for (const auto& e : config.experiments) {
      if (options.verbose)
        std::cerr << "[hlab] experiment " << index << ": " << to_string(e.type) << '\n';
      switch (e.type) {
        case ExperimentType::Validate: run_validate(config.scenario, e, sink, counts); break;
        case ExperimentType::Couple: run_couple(config.scenario, e, index, threads, sink, counts); break;
        case ExperimentType::Harnack: run_harnack(config.scenario, e, threads, sink, counts); break;
        case ExperimentType::LogHarnack: run_log_harnack(config.scenario, e, threads, sink, counts); break;
        case ExperimentType::Girsanov: run_girsanov(config.scenario, e, threads, sink, counts); break;
        case ExperimentType::StrongFeller: run_strong_feller(config.scenario, e, threads, sink, counts); break;
        case ExperimentType::Invariant: run_invariant(config.scenario, e, index, sink, counts); break;
      }
      ++index;
    }
  } catch (const LabError& e) {
    result.exit_code = e.code() == ErrorCode::ConfigParse ? kExitConfigError : kExitRuntimeError;
    result.message = e.what();
    return result;
  } catch (const std::exception& e) {
    result.exit_code = kExitRuntimeError;
    result.message = e.what();
    return result;
  }

  auto& summary = sink.file("summary.csv", "scenario,experiments,holds,violated,inconclusive");
  summary << config.scenario.id << ',' << config.experiments.size() << ',' << counts.holds
          << ',' << counts.violated << ',' << counts.inconclusive << '\n';
  sink.flush();

  result.holds = counts.holds;
  result.violated = counts.violated;
  result.inconclusive = counts.inconclusive;
  result.exit_code = counts.violated > 0 ? kExitViolated : kExitOk;
  return result;
}

RunResult run_config_file(const std::string& path, const std::vector<std::string>& overrides,
                          const RunOptions& options) {
  ExperimentConfig config;
  try {
    config = load_config(path, overrides);
  } catch (const LabError& e) {
    RunResult result;
    result.exit_code = e.code() == ErrorCode::ConfigParse ? kExitConfigError
                                                          : kExitValidationFailure;
    result.message = e.what();
    return result;
  }
  return run_config(config, options);
}

}  // namespace hlab
