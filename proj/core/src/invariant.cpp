#include "hlab/invariant.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "hlab/errors.hpp"
#include "hlab/integrator.hpp"
#include "hlab/numerics.hpp"

namespace hlab {

EmpiricalMeasure sample_invariant(const Scenario& scenario, const Eigen::VectorXd& x0,
                                  double burn_in, double horizon, double stride,
                                  double h, std::uint64_t seed) {
  scenario.check_shapes();
  if (burn_in <= 0.0 || horizon <= 0.0 || stride <= 0.0)
    fail(ErrorCode::InvalidWindow, "burn_in, horizon, stride must be positive");
  if (horizon < burn_in + stride)
    fail(ErrorCode::InvalidWindow, "horizon must exceed burn_in by at least one stride");
  if (h <= 0.0 || h > stride)
    fail(ErrorCode::Validation, "need 0 < h <= stride");
  if (!scenario.op.domain_contains(x0, kDomainTol))
    fail(ErrorCode::DomainEscape, "x0 outside closure(D(A))");

  EmpiricalMeasure measure;
  measure.burn_in = burn_in;
  measure.stride = stride;
  measure.total_time = horizon;
  measure.samples.reserve(static_cast<std::size_t>((horizon - burn_in) / stride) + 2);

  // March the grid t_k = k h; record at the first grid point past each
  // scheduled sample time.
  NoiseStream noise(seed, 0);
  Eigen::VectorXd x = x0, dw(scenario.dim);
  const auto n_steps = static_cast<std::int64_t>(std::ceil(horizon / h - 1e-12));
  double next_record = burn_in;

  // local stepping identical to simulate_path's, without storage
  struct Loop {
    const Scenario& scn;
    Eigen::VectorXd drift, predictor, next;
    ResolventContext resolvent;
    Loop(const Scenario& s)
        : scn(s), drift(s.dim), predictor(s.dim), next(s.dim), resolvent(s.op) {}
    void advance(Eigen::VectorXd& state, double hk, const Eigen::VectorXd& noise_inc) {
      scn.drift.eval_into(state, drift);
      predictor = state + hk * drift;
      predictor.noalias() += scn.diffusion.matrix() * noise_inc;
      resolvent.apply(hk, predictor, next);
      if (scn.op.domain_distance(next) > kDomainTol)
        fail(ErrorCode::DomainEscape, "resolvent left closure(D(A))");
      state.swap(next);
    }
  } loop(scenario);

  for (std::int64_t k = 0; k < n_steps; ++k) {
    const double t = static_cast<double>(k) * h;
    const double hk = (k == n_steps - 1) ? horizon - t : h;
    noise.gaussian_fill(dw);
    dw *= std::sqrt(hk);
    loop.advance(x, hk, dw);
    const double t_next = (k == n_steps - 1) ? horizon : t + hk;
    if (t_next >= next_record) {
      measure.samples.push_back(x);
      next_record += stride;
    }
  }
  if (measure.samples.size() < 2)
    fail(ErrorCode::InvalidWindow, "window too short to retain two samples");
  return measure;
}

namespace {

Estimate estimate_of(const std::vector<double>& values) {
  const MeanStd ms = mean_and_stddev(values);
  Estimate e;
  e.n = static_cast<std::int64_t>(values.size());
  e.mean = ms.mean;
  e.se = e.n > 1 ? ms.stddev / std::sqrt(static_cast<double>(e.n)) : 0.0;
  return e;
}

}  // namespace

Estimate moment(const EmpiricalMeasure& measure, double power) {
  if (power < 1.0) fail(ErrorCode::InvalidExponents, "moment power must be >= 1");
  std::vector<double> values(measure.samples.size());
  for (std::size_t i = 0; i < values.size(); ++i)
    values[i] = std::pow(measure.samples[i].norm(), power);
  return estimate_of(values);
}

ExpMomentEstimate exp_moment(const EmpiricalMeasure& measure, double theta, double power) {
  if (theta <= 0.0) fail(ErrorCode::InvalidExponents, "theta must be positive");
  if (power < 2.0) fail(ErrorCode::InvalidExponents, "power must be >= 2");
  std::vector<double> values(measure.samples.size());
  for (std::size_t i = 0; i < values.size(); ++i)
    values[i] = std::exp(theta * std::pow(measure.samples[i].norm(), power));

  ExpMomentEstimate out;
  out.estimate = estimate_of(values);

  // Top-1% mass share as the instability heuristic.
  std::vector<double> sorted = values;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t top = std::max<std::size_t>(1, sorted.size() / 100);
  const double top_mass =
      pairwise_sum(std::span<const double>(sorted.data() + sorted.size() - top, top));
  const double total = pairwise_sum(sorted);
  out.unstable = total > 0.0 && top_mass > 0.5 * total;
  return out;
}

SupportCoverage support_coverage(const EmpiricalMeasure& measure,
                                 const std::vector<Eigen::VectorXd>& centers,
                                 double radius, const Scenario& scenario) {
  if (radius <= 0.0) fail(ErrorCode::Validation, "radius must be positive");
  for (const auto& c : centers)
    if (!scenario.op.domain_contains(c, kDomainTol))
      fail(ErrorCode::CenterOutsideDomain, "coverage center outside closure(D(A))");

  SupportCoverage out;
  out.hit_fraction.resize(centers.size(), 0.0);
  for (std::size_t ci = 0; ci < centers.size(); ++ci) {
    std::int64_t hits = 0;
    for (const auto& s : measure.samples)
      if ((s - centers[ci]).norm() <= radius) ++hits;
    out.hit_fraction[ci] =
        static_cast<double>(hits) / static_cast<double>(measure.samples.size());
  }
  out.all_hit = std::all_of(out.hit_fraction.begin(), out.hit_fraction.end(),
                            [](double fraction) { return fraction > 0.0; });
  return out;
}

void write_measure_csv(const EmpiricalMeasure& measure, std::ostream& out) {
  if (measure.samples.empty()) return;
  const auto d = measure.samples.front().size();
  for (Eigen::Index i = 0; i < d; ++i) out << (i ? ",x" : "x") << (i + 1);
  out << '\n';
  char buf[32];
  for (const auto& s : measure.samples) {
    for (Eigen::Index i = 0; i < d; ++i) {
      std::snprintf(buf, sizeof(buf), "%.17g", s[i]);
      if (i) out << ',';
      out << buf;
    }
    out << '\n';
  }
}

}  // namespace hlab
