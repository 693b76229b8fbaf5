#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "hlab/montecarlo.hpp"
#include "hlab/scenario.hpp"

namespace hlab {

/// Time-average sample of the invariant measure: states recorded every
/// `stride` along one long trajectory after a burn-in window.
struct EmpiricalMeasure {
  std::vector<Eigen::VectorXd> samples;
  double burn_in = 0.0;
  double stride = 0.0;
  double total_time = 0.0;
};

/// One trajectory over [0, horizon]; discards [0, burn_in), records every
/// stride. horizon must exceed burn_in by at least one stride.
EmpiricalMeasure sample_invariant(const Scenario& scenario, const Eigen::VectorXd& x0,
                                  double burn_in, double horizon, double stride,
                                  double h, std::uint64_t seed);

/// Sample mean/stderr of |x|^power, power >= 1.
Estimate moment(const EmpiricalMeasure& measure, double power);

struct ExpMomentEstimate {
  Estimate estimate;
  /// Heavy-tail warning: the top 1% of samples carries more than half of
  /// the mean, so the empirical average is not trustworthy near the
  /// integrability threshold.
  bool unstable = false;
};

/// Sample mean of exp(theta |x|^power), theta > 0, power >= 2.
ExpMomentEstimate exp_moment(const EmpiricalMeasure& measure, double theta, double power);

struct SupportCoverage {
  std::vector<double> hit_fraction;
  bool all_hit = false;
};

/// Fraction of samples within `radius` of each center. A zero fraction is
/// a finite-sample outcome, not evidence of a support gap.
SupportCoverage support_coverage(const EmpiricalMeasure& measure,
                                 const std::vector<Eigen::VectorXd>& centers,
                                 double radius, const Scenario& scenario);

/// Sample dump: one row per retained state.
void write_measure_csv(const EmpiricalMeasure& measure, std::ostream& out);

}  // namespace hlab
