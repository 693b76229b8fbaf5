#pragma once

#include <Eigen/Dense>

#include "hlab/scenario.hpp"

namespace hlab::testing {

inline Eigen::VectorXd vec1(double v) {
  Eigen::VectorXd x(1);
  x << v;
  return x;
}

/// Reflected Ornstein-Uhlenbeck on [0, inf): A = normal cone of the
/// half-line, B(x) = -x (gamma = 1, omega = 0, q = 2), sigma = 1.
/// Stationary law is the half-normal with scale 1/sqrt(2).
inline Scenario reflected_ou() {
  Scenario s;
  s.id = "reflected_ou";
  s.dim = 1;
  s.op = MonotoneOperator::normal_cone(
      ConvexSet::halfspace(Eigen::VectorXd::Ones(1), 0.0));
  s.drift = DriftSpec::linear(-Eigen::MatrixXd::Identity(1, 1))
                .with_constants(1.0, 0.0, 2.0, 2.0);
  s.diffusion = DiffusionSpec(Eigen::MatrixXd::Identity(1, 1));
  s.c_sigma = 1.5;
  s.r = 0.0;
  return s;
}

/// Scalar linear SDE dX = omega X dt + dW with A = 0. For omega < 0 this
/// is the classical OU process; closed-form Gaussian semigroup:
///   X_T | X_0 = x  ~  N(x e^{omega T}, v_T),  v_T = (e^{2 omega T} - 1)/(2 omega).
inline Scenario scalar_linear(double omega_drift) {
  Scenario s;
  s.id = "scalar_linear";
  s.dim = 1;
  s.op = MonotoneOperator::zero(1);
  s.drift = DriftSpec::linear(omega_drift * Eigen::MatrixXd::Identity(1, 1))
                .with_constants(1.0, omega_drift, 2.0, std::abs(omega_drift) + 1.0);
  s.diffusion = DiffusionSpec(Eigen::MatrixXd::Identity(1, 1));
  s.c_sigma = 1.5;
  s.r = 0.0;
  return s;
}

inline double ou_variance(double omega, double T) {
  // (e^{2 omega T} - 1) / (2 omega), continuous at omega = 0 where it is T
  if (omega == 0.0) return T;
  return std::expm1(2.0 * omega * T) / (2.0 * omega);
}

inline double ou_exp_moment(double lambda, double x, double omega, double T) {
  // E exp(lambda X_T) for the scalar linear scenario started at x
  return std::exp(lambda * x * std::exp(omega * T) +
                  0.5 * lambda * lambda * ou_variance(omega, T));
}

}  // namespace hlab::testing
