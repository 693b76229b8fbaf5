#pragma once

#include <Eigen/Dense>

namespace hlab {

/// Constant nondegenerate diffusion coefficient. The inverse is cached at
/// construction; a numerically singular matrix is rejected immediately
/// (SingularSigma) since every downstream use needs sigma^{-1}.
class DiffusionSpec {
 public:
  explicit DiffusionSpec(Eigen::MatrixXd sigma);

  int dim() const { return static_cast<int>(sigma_.rows()); }
  const Eigen::MatrixXd& matrix() const { return sigma_; }
  const Eigen::MatrixXd& inverse() const { return inverse_; }

  /// Frobenius (Hilbert-Schmidt) norm of sigma.
  double hs_norm() const { return hs_norm_; }
  double condition() const { return condition_; }

  /// |sigma^{-1} v|, the intrinsic norm of v.
  double intrinsic_norm(const Eigen::VectorXd& v) const;

  /// Max |(sigma sigma^{-1} - I)_{ij}|, used by the hypothesis validator.
  double inverse_residual() const;

 private:
  Eigen::MatrixXd sigma_;
  Eigen::MatrixXd inverse_;
  double hs_norm_ = 0.0;
  double condition_ = 0.0;
};

}  // namespace hlab
