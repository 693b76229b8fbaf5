#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "hlab/diffusion.hpp"
#include "hlab/drift.hpp"
#include "hlab/monotone.hpp"
#include "hlab/schedules.hpp"

namespace hlab {

/// delta = 1 - q/(4+r), the gap exponent of the coupling drift. Requires
/// q > 1 and r >= max(0, q-4); equals 0 exactly at q = 4+r, which callers
/// that build couplings must treat as degenerate.
double delta_exponent(double q, double r);

/// One full problem instance: dX in -AX dt + BX dt + sigma dW plus the
/// constants the bounds depend on. Values are immutable after
/// construction and safe to share across workers.
///
/// The state space is R^d throughout, with |.|_V = |.|_H and the
/// embedding constant lambda_embed stored explicitly (= 1 here) so that
/// scenarios with a genuinely stronger V-norm stay expressible.
struct Scenario {
  std::string id = "scenario";
  int dim = 1;
  MonotoneOperator op = MonotoneOperator::zero(1);
  DriftSpec drift = DriftSpec::linear(-Eigen::MatrixXd::Identity(1, 1));
  DiffusionSpec diffusion{Eigen::MatrixXd::Identity(1, 1)};
  double c_sigma = 1.0;
  double r = 0.0;
  double lambda_embed = 1.0;
  ZetaSchedule zeta = ZetaSchedule::constant(1.0);

  double gamma() const { return drift.declared_gamma(); }
  double omega() const { return drift.declared_omega(); }
  double q() const { return drift.declared_q(); }
  double delta() const { return delta_exponent(q(), r); }

  /// Structural consistency (dimensions agree); throws on violation.
  void check_shapes() const;
};

struct HypothesisCheck {
  bool pass = false;
  double worst_slack = 0.0;
  std::string note;
};

struct ValidationReport {
  std::map<std::string, HypothesisCheck> per_hypothesis;
  bool pass = false;

  const HypothesisCheck& at(const std::string& name) const { return per_hypothesis.at(name); }
};

/// Spot-checks the runtime hypotheses behind the scenario: interior
/// domain point, drift hemicontinuity / dissipativity / growth with the
/// declared constants, nondegenerate bounded diffusion, and basic
/// constant sanity (q > 1, gamma > 0, r >= max(0, q-4), zeta > 0).
/// Failures are recorded in the report, never thrown.
ValidationReport validate(const Scenario& scenario, int n_samples = 10000,
                          double radius = 10.0, std::uint64_t seed = 0);

struct ZetaAdmissibleReport {
  double max_ratio = 0.0;
  bool pass = false;
};

/// Samples the norm-control condition
///   zeta_t^2 |sigma^{-1}x|^{2+r} |x|^{q-2-r} <= |x|^q
/// over random x and a time grid; pass iff the worst ratio stays <= 1+tol.
ZetaAdmissibleReport zeta_admissible(const Scenario& scenario, int n_samples = 10000,
                                     std::uint64_t seed = 0, double tol = 1e-9);

}  // namespace hlab
