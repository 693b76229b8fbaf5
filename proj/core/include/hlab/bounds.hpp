#pragma once

#include <Eigen/Dense>

#include "hlab/scenario.hpp"

namespace hlab {

/// Evaluated Harnack bound for one scenario/horizon: the right-hand side
/// prefactor is exp((alpha/(2(alpha-1))) * theta * |x-y|^{2(4+r-q)/(2+r)}).
/// Work in log space: at order-one distances the prefactor is astronomically
/// large and only its logarithm compares meaningfully.
struct HarnackBound {
  double theta = 0.0;
  double q = 2.0;
  double r = 0.0;
  double alpha = 2.0;

  double distance_exponent() const { return 2.0 * (4.0 + r - q) / (2.0 + r); }
  double log_prefactor(double dist) const;
  double exponent(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const {
    return log_prefactor((x - y).norm());
  }
};

/// Theta_T assembled from Simpson quadrature of the two schedule integrals:
///   4 delta^{-2(3+r)/(2+r)} gamma^{-2/(2+r)}
///     * (int zeta_t^2 e^{-delta omega t})^{r/(2+r)} / (int zeta_t e^{-delta omega t})^2.
double theta_quadrature(const Scenario& scenario, double T, int n_quad = 1024);

/// Constant-zeta closed form
///   4 delta^{-1} gamma^{-2/(2+r)} zeta^{-4/(2+r)} [omega^{-1}(1-e^{-delta omega T})]^{-(4+r)/(2+r)},
/// with the omega -> 0 limit (bracket -> delta T) handled via expm1.
double theta_closed_form(const Scenario& scenario, double T);

/// exp(log_prefactor) * P_T f^alpha(y).
double harnack_rhs(const HarnackBound& bound, const Eigen::VectorXd& x,
                   const Eigen::VectorXd& y, double p_t_f_alpha_at_y);

/// Log prefactor of the finite-dimensional monotone-drift Harnack bound:
///   alpha omega dist^2 / ((alpha-1)(1 - e^{-2 omega t})),
/// continuous through omega = 0 where it reads alpha dist^2 / ((alpha-1) 2t).
double msde_harnack_log_constant(double alpha, double omega, double t, double dist);

/// f_sup * Theta^{1/2} dist^{(4+r-q)/(2+r)} exp(Theta dist^{2(4+r-q)/(2+r)} / 2).
double strong_feller_rhs(double theta_t, double dist, double q, double r, double f_sup);

/// log P_T f(y) + Theta_T dist^{2(4+r-q)/(2+r)} / 2.
double log_harnack_rhs(double theta_T, double dist, double q, double r,
                       double log_p_t_f_at_y);

}  // namespace hlab
