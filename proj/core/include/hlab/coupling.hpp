#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <limits>

#include "hlab/integrator.hpp"
#include "hlab/scenario.hpp"
#include "hlab/schedules.hpp"

namespace hlab {

enum class CouplingMode {
  SingularEta,  // extra drift -eta_t (X-Y)/|X-Y|^delta on the X equation
  LinearXi,     // extra drift -xi_t |x0-y0| (X-Y)/|X-Y|
};

/// Running Girsanov record for the change of measure that removes the
/// coupling drift: n_t ~ int <sigma^{-1}U, dW>, qv_t ~ int |sigma^{-1}U|^2 dt,
/// both left-endpoint sums. The density r() = exp(n - qv/2) has mean one
/// exactly at the discrete level since each increment is conditionally
/// Gaussian.
struct GirsanovLedger {
  double n_t = 0.0;
  double qv_t = 0.0;

  double r() const { return std::exp(n_t - 0.5 * qv_t); }
};

/// Paired trajectories driven by the same noise. X carries the coupling
/// drift until the gap first drops to the grid threshold; from that time
/// on the pair is identified (Y copies X's states and reflection
/// increments) and the ledger freezes. Not coupling by the horizon is a
/// recorded outcome, not an error.
struct CoupledTrajectory {
  PathSample x_path;
  PathSample y_path;
  double tau = std::numeric_limits<double>::infinity();
  bool coupled = false;
  GirsanovLedger girsanov;

  // per-step diagnostics (size n_steps): gap before the step, schedule
  // intensity, coupling drift magnitude, and the ledger increments
  Eigen::VectorXd gaps;
  Eigen::VectorXd eta_values;
  Eigen::VectorXd drift_magnitudes;
  Eigen::VectorXd n_increments;
  Eigen::VectorXd qv_increments;
};

/// Storage-free outcome for Monte Carlo fan-out.
struct CoupledSummary {
  bool coupled = false;
  double tau = std::numeric_limits<double>::infinity();
  GirsanovLedger girsanov;
  Eigen::VectorXd x_terminal;
  Eigen::VectorXd y_terminal;
};

struct CouplingOptions {
  /// Grid coupling threshold is threshold_coeff * sqrt(h): the continuous
  /// hitting time of zero is unreachable on a grid whose per-step gap
  /// fluctuation scales like sqrt(h).
  double threshold_coeff = 0.5;
  /// Stop stepping once coupled; the ledger and tau are already final at
  /// that point, terminal states then sit at tau instead of T.
  bool stop_after_coupling = false;
};

inline double coupling_threshold(double h, double coeff = 0.5) {
  return coeff * std::sqrt(h);
}

/// The singular coupling drift U = eta (x-y)/|x-y|^delta before the
/// coupling time, zero after (and at x = y). |U| = eta |x-y|^{1-delta}
/// vanishes continuously as the gap closes.
Eigen::VectorXd coupling_drift(const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                               double eta, double delta, bool pre_tau);

/// Intensity schedule calibrated so the deterministic gap envelope
/// reaches zero exactly at T, forcing tau <= T:
///   theta_T = 2 delta^{-1} |x-y|^delta / int_0^T zeta_t e^{-delta omega t} dt.
EtaSchedule make_eta_schedule(const Scenario& scenario, const Eigen::VectorXd& x,
                              const Eigen::VectorXd& y, double T);

CoupledTrajectory simulate_coupled(const Scenario& scenario, const Eigen::VectorXd& x,
                                   const Eigen::VectorXd& y, double T, double h,
                                   NoiseStream noise, CouplingMode mode,
                                   const CouplingOptions& options = {});

CoupledSummary simulate_coupled_summary(const Scenario& scenario, const Eigen::VectorXd& x,
                                        const Eigen::VectorXd& y, double T, double h,
                                        NoiseStream noise, CouplingMode mode,
                                        const CouplingOptions& options = {});

/// exp(n_T - qv_T / 2).
double girsanov_density(const CoupledTrajectory& trajectory);

/// Trace dump: t, gap, eta_t, |U_t|, running n, running qv.
void write_coupled_trace_csv(const CoupledTrajectory& trajectory,
                             const Scenario& scenario, std::ostream& out);

}  // namespace hlab
