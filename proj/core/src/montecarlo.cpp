#include "hlab/montecarlo.hpp"

#include <cmath>

#include "hlab/errors.hpp"
#include "hlab/integrator.hpp"
#include "hlab/numerics.hpp"
#include "hlab/parallel.hpp"

namespace hlab {

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Holds: return "holds";
    case Verdict::Violated: return "violated";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

namespace {

Estimate estimate_from_values(std::span<const double> values) {
  const MeanStd ms = mean_and_stddev(values);
  Estimate e;
  e.n = static_cast<std::int64_t>(values.size());
  e.mean = ms.mean;
  e.se = e.n > 1 ? ms.stddev / std::sqrt(static_cast<double>(e.n)) : 0.0;
  return e;
}

/// Verdict assembly shared by the Harnack-type checks. Works on logs;
/// lhs/rhs estimates must be positive for their logs to exist, otherwise
/// the check is inconclusive.
void finish_report(HarnackReport& rep) {
  const double lhs_lo = rep.lhs.mean - 3.0 * rep.lhs.se;
  const double rhs_hi_log =
      rep.rhs.mean + 3.0 * rep.rhs.se > 0.0
          ? rep.rhs_log_factor + std::log(rep.rhs.mean + 3.0 * rep.rhs.se)
          : -std::numeric_limits<double>::infinity();
  rep.lhs_log = rep.lhs.mean > 0.0 ? std::log(rep.lhs.mean)
                                   : -std::numeric_limits<double>::infinity();
  rep.rhs_log = rep.rhs.mean > 0.0
                    ? rep.rhs_log_factor + std::log(rep.rhs.mean)
                    : -std::numeric_limits<double>::infinity();
  rep.slack = lhs_lo > 0.0 ? rhs_hi_log - std::log(lhs_lo)
                           : std::numeric_limits<double>::infinity();
  if (rep.rhs_log >= rep.lhs_log) {
    rep.verdict = Verdict::Holds;
  } else if (rep.slack < 0.0) {
    rep.verdict = Verdict::Violated;
  } else {
    rep.verdict = Verdict::Inconclusive;
  }
}

}  // namespace

std::vector<Eigen::VectorXd> semigroup_samples(const Scenario& scenario,
                                               const Eigen::VectorXd& x, double T,
                                               std::int64_t n_paths, double h,
                                               std::uint64_t seed,
                                               const MonteCarloOptions& opt) {
  if (n_paths < 1) fail(ErrorCode::Validation, "need at least one path");
  std::vector<Eigen::VectorXd> samples(static_cast<std::size_t>(n_paths));
  parallel_for(opt.threads, n_paths, [&](std::int64_t i) {
    samples[static_cast<std::size_t>(i)] =
        simulate_terminal(scenario, x, T, h,
                          NoiseStream(seed, static_cast<std::uint64_t>(i)))
            .state;
  });
  return samples;
}

Estimate estimate_from_samples(const std::vector<Eigen::VectorXd>& samples,
                               const TestFunction& f, double power) {
  std::vector<double> values(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double v = f(samples[i]);
    values[i] = power == 1.0 ? v : std::pow(v, power);
  }
  return estimate_from_values(values);
}

Estimate estimate_semigroup(const Scenario& scenario, const Eigen::VectorXd& x, double T,
                            const TestFunction& f, std::int64_t n_paths, double h,
                            std::uint64_t seed, const MonteCarloOptions& opt) {
  if (n_paths < 2) fail(ErrorCode::Validation, "need n_paths >= 2");
  return estimate_from_samples(semigroup_samples(scenario, x, T, n_paths, h, seed, opt),
                               f);
}

HarnackReport make_harnack_report(const std::vector<Eigen::VectorXd>& samples_x,
                                  const std::vector<Eigen::VectorXd>& samples_y,
                                  const TestFunction& f, double alpha,
                                  double log_prefactor) {
  if (alpha <= 1.0) fail(ErrorCode::AlphaOutOfRange, "need alpha > 1");
  HarnackReport rep;
  const Estimate base = estimate_from_samples(samples_x, f);
  // (P f)^alpha with first-order (delta method) error propagation
  rep.lhs.mean = std::pow(base.mean, alpha);
  rep.lhs.se = alpha * std::pow(base.mean, alpha - 1.0) * base.se;
  rep.lhs.n = base.n;
  rep.rhs = estimate_from_samples(samples_y, f, alpha);
  rep.rhs_log_factor = log_prefactor;
  finish_report(rep);
  return rep;
}

HarnackReport verify_harnack(const Scenario& scenario, const Eigen::VectorXd& x,
                             const Eigen::VectorXd& y, double T, double alpha,
                             const TestFunction& f, std::int64_t n_paths, double h,
                             std::uint64_t seed, const MonteCarloOptions& opt,
                             double theta_scale) {
  if (alpha <= 1.0) fail(ErrorCode::AlphaOutOfRange, "need alpha > 1");
  if (f.inf_on(scenario.op) < 0.0)
    fail(ErrorCode::Validation, "Harnack test functions must be positive");
  if (!f.is_bounded_on(scenario.op))
    fail(ErrorCode::FunctionUnbounded, "Harnack test functions must be bounded");

  HarnackBound bound;
  bound.theta = theta_scale * theta_quadrature(scenario, T);
  bound.q = scenario.q();
  bound.r = scenario.r;
  bound.alpha = alpha;

  const bool same_start = x.size() == y.size() && (x - y).squaredNorm() == 0.0;
  const auto samples_x = semigroup_samples(scenario, x, T, n_paths, h, seed, opt);
  const auto samples_y =
      same_start ? samples_x : semigroup_samples(scenario, y, T, n_paths, h, seed, opt);
  return make_harnack_report(samples_x, samples_y, f, alpha, bound.exponent(x, y));
}

HarnackReport make_log_harnack_report(const std::vector<Eigen::VectorXd>& samples_x,
                                      const std::vector<Eigen::VectorXd>& samples_y,
                                      const TestFunction& f, double additive_term) {
  HarnackReport rep;

  // lhs: plain expectation of log f; compare on the log scale directly.
  std::vector<double> logs(samples_x.size());
  for (std::size_t i = 0; i < samples_x.size(); ++i) logs[i] = std::log(f(samples_x[i]));
  const Estimate lhs = estimate_from_values(logs);
  rep.lhs = lhs;
  rep.rhs = estimate_from_samples(samples_y, f);
  rep.rhs_log_factor = additive_term;

  rep.lhs_log = lhs.mean;
  rep.rhs_log = rep.rhs.mean > 0.0
                    ? additive_term + std::log(rep.rhs.mean)
                    : -std::numeric_limits<double>::infinity();
  const double lhs_lo = lhs.mean - 3.0 * lhs.se;
  const double rhs_hi = rep.rhs.mean + 3.0 * rep.rhs.se > 0.0
                            ? additive_term + std::log(rep.rhs.mean + 3.0 * rep.rhs.se)
                            : -std::numeric_limits<double>::infinity();
  rep.slack = rhs_hi - lhs_lo;
  if (rep.rhs_log >= rep.lhs_log) {
    rep.verdict = Verdict::Holds;
  } else if (rep.slack < 0.0) {
    rep.verdict = Verdict::Violated;
  } else {
    rep.verdict = Verdict::Inconclusive;
  }
  return rep;
}

HarnackReport verify_log_harnack(const Scenario& scenario, const Eigen::VectorXd& x,
                                 const Eigen::VectorXd& y, double T,
                                 const TestFunction& f, std::int64_t n_paths, double h,
                                 std::uint64_t seed, const MonteCarloOptions& opt,
                                 double theta_scale) {
  if (f.inf_on(scenario.op) < 1.0)
    fail(ErrorCode::FunctionBelowOne, "log-Harnack needs f >= 1");
  const double theta = theta_scale * theta_quadrature(scenario, T);
  const double dist = (x - y).norm();
  const double term = log_harnack_rhs(theta, dist, scenario.q(), scenario.r, 0.0);

  const bool same_start = x.size() == y.size() && (x - y).squaredNorm() == 0.0;
  const auto samples_x = semigroup_samples(scenario, x, T, n_paths, h, seed, opt);
  const auto samples_y =
      same_start ? samples_x : semigroup_samples(scenario, y, T, n_paths, h, seed, opt);
  return make_log_harnack_report(samples_x, samples_y, f, term);
}

GirsanovReport verify_girsanov(const Scenario& scenario, const Eigen::VectorXd& x,
                               const Eigen::VectorXd& y, double T, const TestFunction& f,
                               std::int64_t n_paths, double h, std::uint64_t seed,
                               CouplingMode mode, const MonteCarloOptions& opt) {
  if (n_paths < 2) fail(ErrorCode::Validation, "need n_paths >= 2");
  const auto n = static_cast<std::size_t>(n_paths);
  std::vector<double> r_values(n), transfer_values(n), coupled_flags(n);
  parallel_for(opt.threads, n_paths, [&](std::int64_t i) {
    const CoupledSummary s =
        simulate_coupled_summary(scenario, x, y, T, h,
                                 NoiseStream(seed, static_cast<std::uint64_t>(i)), mode);
    const auto idx = static_cast<std::size_t>(i);
    r_values[idx] = s.girsanov.r();
    transfer_values[idx] = r_values[idx] * f(s.y_terminal);
    coupled_flags[idx] = s.coupled ? 1.0 : 0.0;
  });

  GirsanovReport rep;
  rep.mean_r = estimate_from_values(r_values);
  rep.transfer_lhs = estimate_from_values(transfer_values);
  rep.coupled_fraction = pairwise_sum(coupled_flags) / static_cast<double>(n_paths);

  // Independent route to P_T f(x): direct simulation from x on the same
  // stream ids (common random numbers; the estimand is unchanged).
  rep.transfer_rhs = estimate_semigroup(scenario, x, T, f, n_paths, h, seed, opt);

  rep.transfer_gap = std::abs(rep.transfer_lhs.mean - rep.transfer_rhs.mean);
  const bool mass_ok = std::abs(rep.mean_r.mean - 1.0) <= 3.0 * rep.mean_r.se;
  const double combined_se = std::hypot(rep.transfer_lhs.se, rep.transfer_rhs.se);
  const bool transfer_ok = rep.transfer_gap <= 3.0 * combined_se;
  rep.pass = mass_ok && transfer_ok;
  return rep;
}

StrongFellerReport verify_strong_feller(const Scenario& scenario, const Eigen::VectorXd& x,
                                        const Eigen::VectorXd& y, double T,
                                        const TestFunction& f, std::int64_t n_paths,
                                        double h, std::uint64_t seed,
                                        const MonteCarloOptions& opt) {
  if (scenario.q() >= 4.0 + scenario.r)
    fail(ErrorCode::ExponentDegenerate, "strong Feller check needs q < 4+r");
  const auto sup = f.sup_on(scenario.op);
  if (!sup) fail(ErrorCode::FunctionUnbounded, "strong Feller needs bounded f");
  if (n_paths < 2) fail(ErrorCode::Validation, "need n_paths >= 2");

  // Common random numbers: same stream id drives both starts, so the
  // difference estimator has the exact estimand with far smaller spread.
  std::vector<double> diffs(static_cast<std::size_t>(n_paths));
  parallel_for(opt.threads, n_paths, [&](std::int64_t i) {
    NoiseStream sx(seed, static_cast<std::uint64_t>(i));
    NoiseStream sy(seed, static_cast<std::uint64_t>(i));
    const auto fx = f(simulate_terminal(scenario, x, T, h, std::move(sx)).state);
    const auto fy = f(simulate_terminal(scenario, y, T, h, std::move(sy)).state);
    diffs[static_cast<std::size_t>(i)] = fx - fy;
  });

  StrongFellerReport rep;
  rep.lhs_diff = estimate_from_values(diffs);
  rep.lhs = std::abs(rep.lhs_diff.mean);
  const double theta = theta_quadrature(scenario, T);
  rep.rhs = strong_feller_rhs(theta, (x - y).norm(), scenario.q(), scenario.r, *sup);
  rep.pass = std::max(0.0, rep.lhs - 3.0 * rep.lhs_diff.se) <= rep.rhs;
  return rep;
}

}  // namespace hlab
