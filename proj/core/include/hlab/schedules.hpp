#pragma once

#include <vector>

namespace hlab {

/// Strictly positive deterministic weight t -> zeta_t appearing in the
/// norm-control condition and in the coupling drift schedule. Constant or
/// piecewise constant; piecewise values hold on [b_{i-1}, b_i) with the
/// last value extending to infinity.
class ZetaSchedule {
 public:
  static ZetaSchedule constant(double value);
  static ZetaSchedule piecewise_constant(std::vector<double> breakpoints,
                                         std::vector<double> values);

  double operator()(double t) const;
  bool is_constant() const { return breakpoints_.empty(); }
  /// Single value of a constant schedule; throws NonConstantZeta otherwise.
  double constant_value() const;

  double max_value(double horizon) const;
  double min_value(double horizon) const;

  /// Exact integral of zeta_t^power * exp(-c t) over [0, T] (power 1 or 2),
  /// stable through c = 0.
  double weighted_exp_integral(double c, double T, int power = 1) const;

  const std::vector<double>& breakpoints() const { return breakpoints_; }
  const std::vector<double>& values() const { return values_; }

 private:
  ZetaSchedule() = default;
  std::vector<double> breakpoints_;  // strictly increasing, size m
  std::vector<double> values_;       // size m + 1
};

/// Coupling drift intensity eta_t = theta_T * zeta_t * exp(-(delta/2) omega t).
/// theta_T is calibrated so the deterministic gap envelope reaches zero
/// exactly at the horizon, which forces the coupling time below T.
struct EtaSchedule {
  double theta_T = 0.0;
  double delta = 0.0;
  double omega = 0.0;
  ZetaSchedule zeta = ZetaSchedule::constant(1.0);

  double operator()(double t) const;
  double max_value(double horizon) const;
};

/// Linear-mode coupling weight xi_t = exp(-omega t) / integral_0^T exp(-2 omega s) ds.
struct XiSchedule {
  double omega = 0.0;
  double horizon = 0.0;
  double denominator = 1.0;

  double operator()(double t) const;
};

XiSchedule make_xi_schedule(double omega, double T);

}  // namespace hlab
