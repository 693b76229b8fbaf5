#include "hlab/coupling.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "hlab/errors.hpp"

namespace hlab {

Eigen::VectorXd coupling_drift(const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                               double eta, double delta, bool pre_tau) {
  if (delta <= 0.0 || delta >= 1.0)
    fail(ErrorCode::DegenerateDelta, "coupling drift needs delta in (0,1)");
  if (eta < 0.0) fail(ErrorCode::Validation, "eta must be nonnegative");
  if (x.size() != y.size()) fail(ErrorCode::DimensionMismatch, "drift endpoints");
  if (!pre_tau) return Eigen::VectorXd::Zero(x.size());
  const Eigen::VectorXd gap = x - y;
  const double dist = gap.norm();
  if (dist == 0.0) return Eigen::VectorXd::Zero(x.size());
  return (eta / std::pow(dist, delta)) * gap;
}

EtaSchedule make_eta_schedule(const Scenario& scenario, const Eigen::VectorXd& x,
                              const Eigen::VectorXd& y, double T) {
  if (T <= 0.0) fail(ErrorCode::Validation, "eta schedule needs T > 0");
  const double dist = (x - y).norm();
  if (dist == 0.0) fail(ErrorCode::CoincidentStart, "x and y coincide");
  const double delta = scenario.delta();
  if (delta <= 0.0 || delta >= 1.0)
    fail(ErrorCode::DegenerateDelta, "delta = 1 - q/(4+r) must lie in (0,1)");
  const double omega = scenario.omega();
  const double denom = scenario.zeta.weighted_exp_integral(delta * omega, T, 1);
  EtaSchedule eta;
  eta.delta = delta;
  eta.omega = omega;
  eta.zeta = scenario.zeta;
  eta.theta_T = 2.0 / delta * std::pow(dist, delta) / denom;
  return eta;
}

namespace {

/// Marches the deterministic gap envelope
///   d(e^{-omega t} g^2)^{delta/2} = -(delta/2) e^{-(delta/2) omega t} eta_t dt
/// and refuses steps so coarse that the scheduled drift could overshoot
/// the remaining gap before it reaches the grid threshold.
void check_step_size_singular(const Scenario& scn, const EtaSchedule& eta, double dist,
                              double T, double h, double threshold) {
  const double delta = eta.delta;
  const int n = 2048;
  const double dt = T / n;
  double m = std::pow(dist, delta);  // m = e^{-(delta/2) omega t} g^delta
  for (int i = 0; i <= n; ++i) {
    const double t = i * dt;
    const double g_pow_delta = m * std::exp(0.5 * delta * eta.omega * t);
    const double g = std::pow(std::max(g_pow_delta, 0.0), 1.0 / delta);
    if (g <= threshold) return;  // envelope inside the coupling threshold
    if (h * eta(t) > 0.5 * g_pow_delta)
      fail(ErrorCode::StepTooCoarse,
           "scheduled drift step exceeds half the remaining gap; refine h");
    m -= dt * 0.5 * delta * std::exp(-0.5 * delta * eta.omega * t) * eta(t);
    if (m <= 0.0) return;
  }
}

void check_step_size_linear(const XiSchedule& xi, double dist, double T, double h,
                            double threshold) {
  double xi_max = 0.0;
  const int n = 256;
  for (int i = 0; i <= n; ++i) xi_max = std::max(xi_max, xi(T * i / n));
  if (h * xi_max * dist > 0.5 * std::max(threshold, 0.0))
    fail(ErrorCode::StepTooCoarse,
         "linear coupling drift step exceeds half the threshold; refine h");
}

struct FullRecorder {
  CoupledTrajectory* out;

  void init(int d, int n, double /*T*/, const Eigen::VectorXd& x0,
            const Eigen::VectorXd& y0) {
    out->x_path.times.assign(n + 1, 0.0);
    out->y_path.times.assign(n + 1, 0.0);
    out->x_path.states.resize(d, n + 1);
    out->y_path.states.resize(d, n + 1);
    out->x_path.k_increments.resize(d, n);
    out->y_path.k_increments.resize(d, n);
    out->x_path.states.col(0) = x0;
    out->y_path.states.col(0) = y0;
    out->gaps.setZero(n);
    out->eta_values.setZero(n);
    out->drift_magnitudes.setZero(n);
    out->n_increments.setZero(n);
    out->qv_increments.setZero(n);
  }

  void record_step(int k, double t_next, const Eigen::VectorXd& x,
                   const Eigen::VectorXd& dkx, const Eigen::VectorXd& y,
                   const Eigen::VectorXd& dky, double gap, double eta, double u_norm,
                   double dn, double dqv) {
    out->x_path.times[k + 1] = t_next;
    out->y_path.times[k + 1] = t_next;
    out->x_path.states.col(k + 1) = x;
    out->y_path.states.col(k + 1) = y;
    out->x_path.k_increments.col(k) = dkx;
    out->y_path.k_increments.col(k) = dky;
    out->x_path.k_total_variation += dkx.norm();
    out->y_path.k_total_variation += dky.norm();
    out->gaps[k] = gap;
    out->eta_values[k] = eta;
    out->drift_magnitudes[k] = u_norm;
    out->n_increments[k] = dn;
    out->qv_increments[k] = dqv;
  }
};

struct TerminalRecorder {
  void init(int, int, double, const Eigen::VectorXd&, const Eigen::VectorXd&) {}
  void record_step(int, double, const Eigen::VectorXd&, const Eigen::VectorXd&,
                   const Eigen::VectorXd&, const Eigen::VectorXd&, double, double,
                   double, double, double) {}
};

struct CoupledState {
  bool coupled = false;
  double tau = std::numeric_limits<double>::infinity();
  GirsanovLedger ledger;
  Eigen::VectorXd x;
  Eigen::VectorXd y;
};

struct CoupledWorkspace {
  Eigen::VectorXd drift, predictor, next, dw, u, sigma_inv_u, dkx, dky;
  ResolventContext resolvent;

  CoupledWorkspace(int d, const MonotoneOperator& op)
      : drift(d), predictor(d), next(d), dw(d), u(d), sigma_inv_u(d), dkx(d), dky(d),
        resolvent(op) {}
};

/// One splitting step of a single equation; x is advanced in place.
inline void advance_one(const Scenario& scn, Eigen::VectorXd& x, double h,
                        const Eigen::VectorXd& dw, const Eigen::VectorXd* extra,
                        CoupledWorkspace& ws, Eigen::VectorXd& dk_out) {
  scn.drift.eval_into(x, ws.drift);
  ws.predictor = x + h * ws.drift;
  ws.predictor.noalias() += scn.diffusion.matrix() * dw;
  if (extra) ws.predictor -= h * (*extra);  // coupling drift enters negatively
  ws.resolvent.apply(h, ws.predictor, ws.next);
  if (scn.op.domain_distance(ws.next) > kDomainTol)
    fail(ErrorCode::DomainEscape, "resolvent left closure(D(A))");
  dk_out = ws.predictor - ws.next;
  x.swap(ws.next);
}

template <typename Recorder>
CoupledState run_coupled(const Scenario& scn, const Eigen::VectorXd& x0,
                         const Eigen::VectorXd& y0, double T, double h,
                         NoiseStream& noise, CouplingMode mode,
                         const CouplingOptions& opt, Recorder& rec) {
  scn.check_shapes();
  if (x0.size() != scn.dim || y0.size() != scn.dim)
    fail(ErrorCode::DimensionMismatch, "coupled start dimensions");
  if (T < 0.0 || (T > 0.0 && (h <= 0.0 || h > T)))
    fail(ErrorCode::Validation, "need 0 < h <= T");
  if (!scn.op.domain_contains(x0, kDomainTol) || !scn.op.domain_contains(y0, kDomainTol))
    fail(ErrorCode::DomainEscape, "start point outside closure(D(A))");

  const int d = scn.dim;
  const double threshold = coupling_threshold(h, opt.threshold_coeff);
  const double dist0 = (x0 - y0).norm();

  CoupledState st;
  st.x = x0;
  st.y = y0;
  if (dist0 <= threshold) {
    st.coupled = true;
    st.tau = 0.0;
    st.y = st.x;
  }

  // schedules (only needed while uncoupled)
  EtaSchedule eta;
  XiSchedule xi;
  double delta = 0.0;
  if (!st.coupled) {
    if (mode == CouplingMode::SingularEta) {
      eta = make_eta_schedule(scn, x0, y0, T);
      delta = eta.delta;
      check_step_size_singular(scn, eta, dist0, T, h, threshold);
    } else {
      xi = make_xi_schedule(scn.omega(), T);
      check_step_size_linear(xi, dist0, T, h, threshold);
    }
  }

  const int n = (T == 0.0) ? 0 : std::max(1, static_cast<int>(std::ceil(T / h - 1e-12)));
  rec.init(d, n, T, st.x, st.y);

  CoupledWorkspace ws(d, scn.op);
  for (int k = 0; k < n; ++k) {
    const double t = k * h;
    const double hk = (k == n - 1) ? T - t : h;
    noise.gaussian_fill(ws.dw);
    ws.dw *= std::sqrt(hk);

    double gap = 0.0, eta_t = 0.0, u_norm = 0.0, dn = 0.0, dqv = 0.0;
    if (!st.coupled) {
      const double dist = (st.x - st.y).norm();
      gap = dist;
      if (mode == CouplingMode::SingularEta) {
        eta_t = eta(t);
        ws.u = (eta_t / std::pow(dist, delta)) * (st.x - st.y);
      } else {
        eta_t = xi(t) * dist0;
        ws.u = (eta_t / dist) * (st.x - st.y);
      }
      u_norm = ws.u.norm();
      ws.sigma_inv_u.noalias() = scn.diffusion.inverse() * ws.u;
      dn = ws.sigma_inv_u.dot(ws.dw);
      dqv = ws.sigma_inv_u.squaredNorm() * hk;
      st.ledger.n_t += dn;
      st.ledger.qv_t += dqv;

      advance_one(scn, st.x, hk, ws.dw, &ws.u, ws, ws.dkx);
      advance_one(scn, st.y, hk, ws.dw, nullptr, ws, ws.dky);
      if ((st.x - st.y).norm() <= threshold) {
        st.coupled = true;
        st.tau = t + hk;
        st.y = st.x;  // identification from tau onward
      }
    } else {
      advance_one(scn, st.x, hk, ws.dw, nullptr, ws, ws.dkx);
      st.y = st.x;
      ws.dky = ws.dkx;  // shared reflection increments after tau
    }
    rec.record_step(k, (k == n - 1) ? T : t + hk, st.x, ws.dkx, st.y, ws.dky, gap,
                    eta_t, u_norm, dn, dqv);
    if (st.coupled && opt.stop_after_coupling) break;
  }
  return st;
}

}  // namespace

CoupledTrajectory simulate_coupled(const Scenario& scenario, const Eigen::VectorXd& x,
                                   const Eigen::VectorXd& y, double T, double h,
                                   NoiseStream noise, CouplingMode mode,
                                   const CouplingOptions& options) {
  CoupledTrajectory trajectory;
  FullRecorder rec{&trajectory};
  CouplingOptions opt = options;
  opt.stop_after_coupling = false;  // full trajectories always run to T
  const CoupledState st = run_coupled(scenario, x, y, T, h, noise, mode, opt, rec);
  trajectory.tau = st.tau;
  trajectory.coupled = st.coupled;
  trajectory.girsanov = st.ledger;
  return trajectory;
}

CoupledSummary simulate_coupled_summary(const Scenario& scenario, const Eigen::VectorXd& x,
                                        const Eigen::VectorXd& y, double T, double h,
                                        NoiseStream noise, CouplingMode mode,
                                        const CouplingOptions& options) {
  TerminalRecorder rec;
  CoupledState st = run_coupled(scenario, x, y, T, h, noise, mode, options, rec);
  CoupledSummary out;
  out.coupled = st.coupled;
  out.tau = st.tau;
  out.girsanov = st.ledger;
  out.x_terminal = std::move(st.x);
  out.y_terminal = std::move(st.y);
  return out;
}

double girsanov_density(const CoupledTrajectory& trajectory) {
  return trajectory.girsanov.r();
}

void write_coupled_trace_csv(const CoupledTrajectory& trajectory,
                             const Scenario& scenario, std::ostream& out) {
  (void)scenario;
  out << "t,gap,eta,u_norm,running_n,running_qv\n";
  char buf[32];
  auto put = [&](double v, char sep) {
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    out << buf << sep;
  };
  double running_n = 0.0, running_qv = 0.0;
  const int n = static_cast<int>(trajectory.gaps.size());
  for (int k = 0; k < n; ++k) {
    running_n += trajectory.n_increments[k];
    running_qv += trajectory.qv_increments[k];
    put(trajectory.x_path.times[k], ',');
    put(trajectory.gaps[k], ',');
    put(trajectory.eta_values[k], ',');
    put(trajectory.drift_magnitudes[k], ',');
    put(running_n, ',');
    put(running_qv, '\n');
  }
}

}  // namespace hlab
