#include "hlab/bounds.hpp"

#include <cmath>

#include "hlab/errors.hpp"
#include "hlab/numerics.hpp"

namespace hlab {

double HarnackBound::log_prefactor(double dist) const {
  if (alpha <= 1.0) fail(ErrorCode::AlphaOutOfRange, "need alpha > 1");
  return alpha / (2.0 * (alpha - 1.0)) * theta * std::pow(dist, distance_exponent());
}

double theta_quadrature(const Scenario& scenario, double T, int n_quad) {
  if (T <= 0.0) fail(ErrorCode::Validation, "theta needs T > 0");
  if (n_quad < 16) n_quad = 16;
  const double q = scenario.q(), r = scenario.r;
  const double delta = delta_exponent(q, r);
  if (delta <= 0.0 || delta >= 1.0)
    fail(ErrorCode::DegenerateDelta, "delta must lie in (0,1)");
  const double c = delta * scenario.omega();

  // Integrate piecewise so discontinuities of a piecewise zeta never sit
  // inside a Simpson panel.
  auto integrate = [&](int power) {
    const auto& breaks = scenario.zeta.breakpoints();
    double total = 0.0, lo = 0.0;
    std::size_t piece = 0;
    while (lo < T) {
      const double hi = (piece < breaks.size()) ? std::min(breaks[piece], T) : T;
      if (hi > lo) {
        const int panels =
            std::max(16, static_cast<int>(std::lround(n_quad * (hi - lo) / T)));
        const double z = scenario.zeta(lo);  // constant on [lo, hi)
        const double w = power == 2 ? z * z : z;
        total += simpson([&](double t) { return w * std::exp(-c * t); }, lo, hi, panels);
      }
      lo = hi;
      ++piece;
      if (piece > breaks.size()) break;
    }
    return total;
  };

  const double num = integrate(2);
  const double den = integrate(1);
  return 4.0 * std::pow(delta, -2.0 * (3.0 + r) / (2.0 + r)) *
         std::pow(scenario.gamma(), -2.0 / (2.0 + r)) *
         std::pow(num, r / (2.0 + r)) / (den * den);
}

double theta_closed_form(const Scenario& scenario, double T) {
  if (T <= 0.0) fail(ErrorCode::Validation, "theta needs T > 0");
  const double zeta = scenario.zeta.constant_value();  // NonConstantZeta if piecewise
  const double q = scenario.q(), r = scenario.r;
  const double delta = delta_exponent(q, r);
  if (delta <= 0.0 || delta >= 1.0)
    fail(ErrorCode::DegenerateDelta, "delta must lie in (0,1)");
  // bracket = (1 - e^{-delta omega T}) / omega = delta * int_0^T e^{-delta omega t} dt
  const double bracket = delta * integral_exp_decay(delta * scenario.omega(), T);
  return 4.0 / delta * std::pow(scenario.gamma(), -2.0 / (2.0 + r)) *
         std::pow(zeta, -4.0 / (2.0 + r)) * std::pow(bracket, -(4.0 + r) / (2.0 + r));
}

double harnack_rhs(const HarnackBound& bound, const Eigen::VectorXd& x,
                   const Eigen::VectorXd& y, double p_t_f_alpha_at_y) {
  if (p_t_f_alpha_at_y < 0.0)
    fail(ErrorCode::Validation, "semigroup value of f^alpha must be nonnegative");
  return std::exp(bound.exponent(x, y)) * p_t_f_alpha_at_y;
}

double msde_harnack_log_constant(double alpha, double omega, double t, double dist) {
  if (alpha <= 1.0) fail(ErrorCode::AlphaOutOfRange, "need alpha > 1");
  if (t <= 0.0) fail(ErrorCode::Validation, "need t > 0");
  // omega / (1 - e^{-2 omega t}) = 1 / (2t * expm1_ratio(2 omega t))
  const double rate = 1.0 / (2.0 * t * expm1_ratio(2.0 * omega * t));
  return alpha / (alpha - 1.0) * rate * dist * dist;
}

double strong_feller_rhs(double theta_t, double dist, double q, double r, double f_sup) {
  if (theta_t <= 0.0) fail(ErrorCode::Validation, "theta must be positive");
  if (q >= 4.0 + r)
    fail(ErrorCode::ExponentDegenerate, "strong Feller modulus needs q < 4+r");
  const double p = (4.0 + r - q) / (2.0 + r);
  const double dp = std::pow(dist, p);
  return f_sup * std::sqrt(theta_t) * dp * std::exp(0.5 * theta_t * dp * dp);
}

double log_harnack_rhs(double theta_T, double dist, double q, double r,
                       double log_p_t_f_at_y) {
  const double p = 2.0 * (4.0 + r - q) / (2.0 + r);
  return log_p_t_f_at_y + 0.5 * theta_T * std::pow(dist, p);
}

}  // namespace hlab
