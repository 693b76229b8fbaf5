#include "hlab/drift.hpp"

#include <cmath>

#include "hlab/errors.hpp"

namespace hlab {

DriftSpec DriftSpec::linear(Eigen::MatrixXd matrix) {
  if (matrix.rows() != matrix.cols() || matrix.rows() < 1)
    fail(ErrorCode::DimensionMismatch, "drift matrix must be square");
  DriftSpec b(Kind::Linear, static_cast<int>(matrix.rows()));
  b.matrix_ = std::move(matrix);
  return b;
}

DriftSpec DriftSpec::power_dissipative(double exponent, double gain, int dim) {
  if (exponent < 2.0) fail(ErrorCode::InvalidExponents, "power drift needs exponent >= 2");
  if (gain <= 0.0) fail(ErrorCode::Validation, "power drift needs gain > 0");
  if (dim < 1) fail(ErrorCode::DimensionMismatch, "dimension must be positive");
  DriftSpec b(Kind::PowerDissipative, dim);
  b.exponent_ = exponent;
  b.gain_ = gain;
  return b;
}

DriftSpec DriftSpec::affine(Eigen::MatrixXd matrix, Eigen::VectorXd shift) {
  if (matrix.rows() != matrix.cols() || matrix.rows() != shift.size())
    fail(ErrorCode::DimensionMismatch, "affine drift shapes disagree");
  DriftSpec b(Kind::Affine, static_cast<int>(matrix.rows()));
  b.matrix_ = std::move(matrix);
  b.shift_ = std::move(shift);
  return b;
}

DriftSpec& DriftSpec::with_constants(double gamma, double omega, double q, double growth) {
  gamma_ = gamma;
  omega_ = omega;
  q_ = q;
  growth_ = growth;
  return *this;
}

void DriftSpec::eval_into(const Eigen::VectorXd& x, Eigen::VectorXd& out) const {
  switch (kind_) {
    case Kind::Linear:
      out.noalias() = matrix_ * x;
      return;
    case Kind::PowerDissipative: {
      const double norm = x.norm();
      const double scale = norm == 0.0 ? 0.0 : -gain_ * std::pow(norm, exponent_ - 2.0);
      out = scale * x;
      return;
    }
    case Kind::Affine:
      out.noalias() = matrix_ * x;
      out += shift_;
      return;
  }
}

Eigen::VectorXd DriftSpec::operator()(const Eigen::VectorXd& x) const {
  Eigen::VectorXd out(dim_);
  eval_into(x, out);
  return out;
}

}  // namespace hlab
