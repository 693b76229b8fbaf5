#include "hlab/integrator.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "hlab/errors.hpp"

namespace hlab {

namespace {

struct StepWorkspace {
  Eigen::VectorXd drift;
  Eigen::VectorXd predictor;
  Eigen::VectorXd next;
  ResolventContext resolvent;

  StepWorkspace(int dim, const MonotoneOperator& op)
      : drift(dim), predictor(dim), next(dim), resolvent(op) {}
};

/// Advances x in place; returns the variation |dK| of the step and writes
/// dK into dk_out when requested.
inline double advance(const Scenario& scn, Eigen::VectorXd& x, double h,
                      const Eigen::VectorXd& dw, const Eigen::VectorXd* extra,
                      StepWorkspace& ws, Eigen::VectorXd* dk_out) {
  scn.drift.eval_into(x, ws.drift);
  ws.predictor = x + h * ws.drift;
  ws.predictor.noalias() += scn.diffusion.matrix() * dw;
  if (extra) ws.predictor += h * (*extra);
  ws.resolvent.apply(h, ws.predictor, ws.next);
  const double escape = scn.op.domain_distance(ws.next);
  if (escape > kDomainTol)
    fail(ErrorCode::DomainEscape, "resolvent left closure(D(A)); operator broken");
  ws.predictor -= ws.next;  // now holds dK
  if (dk_out) *dk_out = ws.predictor;
  x.swap(ws.next);
  return ws.predictor.norm();
}

inline int step_count(double T, double h) {
  if (T == 0.0) return 0;
  int n = static_cast<int>(std::ceil(T / h - 1e-12));
  return n < 1 ? 1 : n;
}

void check_simulation_inputs(const Scenario& scn, const Eigen::VectorXd& x0, double T,
                             double h) {
  scn.check_shapes();
  if (x0.size() != scn.dim) fail(ErrorCode::DimensionMismatch, "x0 dimension mismatch");
  if (T < 0.0) fail(ErrorCode::Validation, "horizon must be nonnegative");
  if (T > 0.0 && (h <= 0.0 || h > T))
    fail(ErrorCode::Validation, "need 0 < h <= T");
  if (!scn.op.domain_contains(x0, kDomainTol))
    fail(ErrorCode::DomainEscape, "x0 outside closure(D(A))");
}

}  // namespace

StepResult step(const Scenario& scenario, const Eigen::VectorXd& x, double h,
                const Eigen::VectorXd& dw, const Eigen::VectorXd& extra_drift) {
  scenario.check_shapes();
  if (h <= 0.0) fail(ErrorCode::NonPositiveLambda, "step size must be positive");
  if (x.size() != scenario.dim || dw.size() != scenario.dim ||
      extra_drift.size() != scenario.dim)
    fail(ErrorCode::DimensionMismatch, "step input dimensions disagree");

  StepWorkspace ws(scenario.dim, scenario.op);
  StepResult out;
  out.x_next = x;
  advance(scenario, out.x_next, h, dw, &extra_drift, ws, &out.dk);
  return out;
}

PathSample simulate_path(const Scenario& scenario, const Eigen::VectorXd& x0, double T,
                         double h, NoiseStream noise, const DriftSchedule& extra_drift) {
  check_simulation_inputs(scenario, x0, T, h);
  const int n = step_count(T, h);
  const int d = scenario.dim;

  PathSample path;
  path.times.resize(n + 1);
  path.states.resize(d, n + 1);
  path.k_increments.resize(d, n);
  path.times[0] = 0.0;
  path.states.col(0) = x0;

  StepWorkspace ws(d, scenario.op);
  Eigen::VectorXd x = x0, dw(d), dk(d), extra(d);
  for (int k = 0; k < n; ++k) {
    const double t = k * h;
    const double hk = (k == n - 1) ? T - t : h;
    noise.gaussian_fill(dw);
    dw *= std::sqrt(hk);
    const Eigen::VectorXd* extra_ptr = nullptr;
    if (extra_drift) {
      extra = extra_drift(t);
      extra_ptr = &extra;
    }
    path.k_total_variation += advance(scenario, x, hk, dw, extra_ptr, ws, &dk);
    path.k_increments.col(k) = dk;
    path.states.col(k + 1) = x;
    path.times[k + 1] = (k == n - 1) ? T : (k + 1) * h;
  }
  return path;
}

TerminalSample simulate_terminal(const Scenario& scenario, const Eigen::VectorXd& x0,
                                 double T, double h, NoiseStream noise,
                                 const DriftSchedule& extra_drift) {
  check_simulation_inputs(scenario, x0, T, h);
  const int n = step_count(T, h);
  const int d = scenario.dim;

  TerminalSample out;
  StepWorkspace ws(d, scenario.op);
  Eigen::VectorXd x = x0, dw(d), extra(d);
  for (int k = 0; k < n; ++k) {
    const double t = k * h;
    const double hk = (k == n - 1) ? T - t : h;
    noise.gaussian_fill(dw);
    dw *= std::sqrt(hk);
    const Eigen::VectorXd* extra_ptr = nullptr;
    if (extra_drift) {
      extra = extra_drift(t);
      extra_ptr = &extra;
    }
    out.k_total_variation += advance(scenario, x, hk, dw, extra_ptr, ws, nullptr);
  }
  out.state = std::move(x);
  return out;
}

MonotonicityReport discrete_monotonicity_check(const PathSample& path1,
                                               const PathSample& path2,
                                               double tol_pairing) {
  if (path1.times.size() != path2.times.size() || path1.dim() != path2.dim())
    fail(ErrorCode::GridMismatch, "paths live on different grids");
  for (std::size_t i = 0; i < path1.times.size(); ++i)
    if (path1.times[i] != path2.times[i])
      fail(ErrorCode::GridMismatch, "paths live on different grids");

  MonotonicityReport report;
  report.min_pairing = 0.0;
  double h_max = 0.0;
  for (int k = 0; k < path1.n_steps(); ++k) {
    h_max = std::max(h_max, path1.times[k + 1] - path1.times[k]);
    const double pairing = (path1.states.col(k + 1) - path2.states.col(k + 1))
                               .dot(path1.k_increments.col(k) - path2.k_increments.col(k));
    if (pairing < report.min_pairing) report.min_pairing = pairing;
  }
  report.pass = report.min_pairing >= -tol_pairing * std::max(h_max, 1e-300);
  return report;
}

void write_path_csv(const PathSample& path, std::ostream& out) {
  out << "t";
  for (int i = 0; i < path.dim(); ++i) out << ",x" << (i + 1);
  out << ",dk_norm,k_variation\n";
  char buf[32];
  double variation = 0.0;
  for (std::size_t k = 0; k < path.times.size(); ++k) {
    const double dk_norm = (k == 0) ? 0.0 : path.k_increments.col(k - 1).norm();
    variation += dk_norm;
    std::snprintf(buf, sizeof(buf), "%.17g", path.times[k]);
    out << buf;
    for (int i = 0; i < path.dim(); ++i) {
      std::snprintf(buf, sizeof(buf), "%.17g", path.states(i, k));
      out << ',' << buf;
    }
    std::snprintf(buf, sizeof(buf), "%.17g", dk_norm);
    out << ',' << buf;
    std::snprintf(buf, sizeof(buf), "%.17g", variation);
    out << ',' << buf << '\n';
  }
}

}  // namespace hlab
