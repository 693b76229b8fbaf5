#pragma once

#include <Eigen/Dense>

namespace hlab {

/// Single-valued drift B with declared dissipativity constants. The
/// constants (gamma, omega, q, growth) are user claims about B; the
/// scenario validator spot-checks them, it never infers them.
class DriftSpec {
 public:
  enum class Kind { Linear, PowerDissipative, Affine };

  static DriftSpec linear(Eigen::MatrixXd matrix);
  /// B(x) = -gain * x * |x|^{exponent-2}, exponent >= 2.
  static DriftSpec power_dissipative(double exponent, double gain, int dim);
  static DriftSpec affine(Eigen::MatrixXd matrix, Eigen::VectorXd shift);

  DriftSpec& with_constants(double gamma, double omega, double q, double growth);

  Kind kind() const { return kind_; }
  int dim() const { return dim_; }

  Eigen::VectorXd operator()(const Eigen::VectorXd& x) const;
  void eval_into(const Eigen::VectorXd& x, Eigen::VectorXd& out) const;

  double declared_gamma() const { return gamma_; }
  double declared_omega() const { return omega_; }
  double declared_q() const { return q_; }
  double declared_growth() const { return growth_; }

  const Eigen::MatrixXd& matrix() const { return matrix_; }
  const Eigen::VectorXd& shift() const { return shift_; }
  double exponent() const { return exponent_; }
  double gain() const { return gain_; }

 private:
  DriftSpec(Kind kind, int dim) : kind_(kind), dim_(dim) {}

  Kind kind_;
  int dim_;
  Eigen::MatrixXd matrix_;
  Eigen::VectorXd shift_;
  double exponent_ = 2.0;
  double gain_ = 1.0;

  double gamma_ = 1.0;
  double omega_ = 0.0;
  double q_ = 2.0;
  double growth_ = 1.0;
};

}  // namespace hlab
