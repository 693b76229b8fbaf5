#include "hlab/schedules.hpp"

#include <algorithm>
#include <cmath>

#include "hlab/errors.hpp"
#include "hlab/numerics.hpp"

namespace hlab {

ZetaSchedule ZetaSchedule::constant(double value) {
  if (value <= 0.0) fail(ErrorCode::Validation, "zeta must be strictly positive");
  ZetaSchedule s;
  s.values_ = {value};
  return s;
}

ZetaSchedule ZetaSchedule::piecewise_constant(std::vector<double> breakpoints,
                                              std::vector<double> values) {
  if (values.size() != breakpoints.size() + 1)
    fail(ErrorCode::Validation, "piecewise zeta needs one more value than breakpoints");
  for (std::size_t i = 0; i < breakpoints.size(); ++i) {
    if (breakpoints[i] <= 0.0 || (i > 0 && breakpoints[i] <= breakpoints[i - 1]))
      fail(ErrorCode::Validation, "zeta breakpoints must be positive and increasing");
  }
  for (double v : values)
    if (v <= 0.0) fail(ErrorCode::Validation, "zeta must be strictly positive");
  ZetaSchedule s;
  s.breakpoints_ = std::move(breakpoints);
  s.values_ = std::move(values);
  return s;
}

double ZetaSchedule::operator()(double t) const {
  if (breakpoints_.empty()) return values_[0];
  const auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), t);
  return values_[static_cast<std::size_t>(it - breakpoints_.begin())];
}

double ZetaSchedule::constant_value() const {
  if (!is_constant()) fail(ErrorCode::NonConstantZeta, "schedule is piecewise");
  return values_[0];
}

double ZetaSchedule::max_value(double horizon) const {
  double m = values_[0];
  for (std::size_t i = 0; i < breakpoints_.size(); ++i) {
    if (breakpoints_[i] >= horizon) break;
    m = std::max(m, values_[i + 1]);
  }
  return m;
}

double ZetaSchedule::min_value(double horizon) const {
  double m = values_[0];
  for (std::size_t i = 0; i < breakpoints_.size(); ++i) {
    if (breakpoints_[i] >= horizon) break;
    m = std::min(m, values_[i + 1]);
  }
  return m;
}

double ZetaSchedule::weighted_exp_integral(double c, double T, int power) const {
  if (T <= 0.0) return 0.0;
  double total = 0.0;
  double lo = 0.0;
  std::size_t piece = 0;
  while (lo < T) {
    const double hi = (piece < breakpoints_.size()) ? std::min(breakpoints_[piece], T) : T;
    if (hi > lo) {
      const double v = (power == 2) ? values_[piece] * values_[piece] : values_[piece];
      // integral of exp(-c t) over [lo, hi]
      total += v * std::exp(-c * lo) * integral_exp_decay(c, hi - lo);
    }
    lo = hi;
    ++piece;
    if (piece > breakpoints_.size()) break;
  }
  return total;
}

double EtaSchedule::operator()(double t) const {
  return theta_T * zeta(t) * std::exp(-0.5 * delta * omega * t);
}

double EtaSchedule::max_value(double horizon) const {
  const double zmax = zeta.max_value(horizon);
  const double decay = omega >= 0.0 ? 1.0 : std::exp(-0.5 * delta * omega * horizon);
  return theta_T * zmax * decay;
}

double XiSchedule::operator()(double t) const {
  return std::exp(-omega * t) / denominator;
}

XiSchedule make_xi_schedule(double omega, double T) {
  if (T <= 0.0) fail(ErrorCode::Validation, "xi schedule needs T > 0");
  XiSchedule xi;
  xi.omega = omega;
  xi.horizon = T;
  xi.denominator = integral_exp_decay(2.0 * omega, T);
  return xi;
}

}  // namespace hlab
