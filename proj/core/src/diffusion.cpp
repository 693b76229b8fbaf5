#include "hlab/diffusion.hpp"

#include "hlab/errors.hpp"

namespace hlab {

DiffusionSpec::DiffusionSpec(Eigen::MatrixXd sigma) : sigma_(std::move(sigma)) {
  if (sigma_.rows() != sigma_.cols() || sigma_.rows() < 1)
    fail(ErrorCode::DimensionMismatch, "diffusion matrix must be square");
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(sigma_, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const double smax = svd.singularValues()(0);
  const double smin = svd.singularValues()(svd.singularValues().size() - 1);
  if (smin <= 0.0 || smin < 1e-13 * smax)
    fail(ErrorCode::SingularSigma, "diffusion matrix is numerically singular");
  condition_ = smax / smin;
  inverse_ = sigma_.partialPivLu().inverse();
  hs_norm_ = sigma_.norm();
}

double DiffusionSpec::intrinsic_norm(const Eigen::VectorXd& v) const {
  return (inverse_ * v).norm();
}

double DiffusionSpec::inverse_residual() const {
  return (sigma_ * inverse_ - Eigen::MatrixXd::Identity(dim(), dim()))
      .cwiseAbs()
      .maxCoeff();
}

}  // namespace hlab
