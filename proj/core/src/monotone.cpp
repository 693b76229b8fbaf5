#include "hlab/monotone.hpp"

#include <cmath>
#include <limits>

#include "hlab/errors.hpp"
#include "hlab/rng.hpp"

namespace hlab {

MonotoneOperator MonotoneOperator::zero(int dim) {
  if (dim < 1) fail(ErrorCode::DimensionMismatch, "dimension must be positive");
  return MonotoneOperator(Kind::Zero, dim);
}

MonotoneOperator MonotoneOperator::normal_cone(ConvexSet set) {
  MonotoneOperator op(Kind::NormalCone, set.dim());
  op.set_ = std::move(set);
  return op;
}

MonotoneOperator MonotoneOperator::linear_psd(Eigen::MatrixXd matrix) {
  if (matrix.rows() != matrix.cols() || matrix.rows() < 1)
    fail(ErrorCode::DimensionMismatch, "linear operator matrix must be square");
  MonotoneOperator op(Kind::LinearPsd, static_cast<int>(matrix.rows()));
  op.matrix_ = std::move(matrix);
  return op;
}

MonotoneOperator MonotoneOperator::scaled_subgradient_abs(double weight, int dim) {
  if (weight < 0.0) fail(ErrorCode::Validation, "subgradient weight must be >= 0");
  if (dim < 1) fail(ErrorCode::DimensionMismatch, "dimension must be positive");
  MonotoneOperator op(Kind::ScaledSubgradientAbs, dim);
  op.weight_ = weight;
  return op;
}

MonotoneOperator MonotoneOperator::custom(int dim, ResolventFn resolvent,
                                          DomainDistanceFn domain_distance) {
  if (dim < 1) fail(ErrorCode::DimensionMismatch, "dimension must be positive");
  if (!resolvent) fail(ErrorCode::Validation, "custom operator needs a resolvent");
  MonotoneOperator op(Kind::Custom, dim);
  op.custom_resolvent_ = std::move(resolvent);
  op.custom_domain_ = std::move(domain_distance);
  return op;
}

void MonotoneOperator::resolvent_into(double lambda, const Eigen::VectorXd& x,
                                      Eigen::VectorXd& out) const {
  if (lambda <= 0.0) fail(ErrorCode::NonPositiveLambda, "resolvent needs lambda > 0");
  if (x.size() != dim_) fail(ErrorCode::DimensionMismatch, "resolvent point dimension");
  switch (kind_) {
    case Kind::Zero:
      out = x;
      return;
    case Kind::NormalCone:
      set_->project_into(x, out);
      return;
    case Kind::LinearPsd:
      out = (Eigen::MatrixXd::Identity(dim_, dim_) + lambda * matrix_)
                .partialPivLu()
                .solve(x);
      return;
    case Kind::ScaledSubgradientAbs: {
      const double t = lambda * weight_;
      out.resize(x.size());
      for (Eigen::Index i = 0; i < x.size(); ++i) {
        const double v = x[i];
        out[i] = v > t ? v - t : (v < -t ? v + t : 0.0);
      }
      return;
    }
    case Kind::Custom:
      out = custom_resolvent_(lambda, x);
      return;
  }
}

Eigen::VectorXd MonotoneOperator::resolvent(double lambda, const Eigen::VectorXd& x) const {
  Eigen::VectorXd out;
  resolvent_into(lambda, x, out);
  return out;
}

Eigen::VectorXd MonotoneOperator::yosida(double lambda, const Eigen::VectorXd& x) const {
  return (x - resolvent(lambda, x)) / lambda;
}

void ResolventContext::apply(double lambda, const Eigen::VectorXd& x,
                             Eigen::VectorXd& out) {
  if (op_->kind() == MonotoneOperator::Kind::LinearPsd) {
    if (lambda != cached_lambda_) {
      lu_.compute(Eigen::MatrixXd::Identity(op_->dim(), op_->dim()) +
                  lambda * op_->matrix_);
      cached_lambda_ = lambda;
    }
    out = lu_.solve(x);
    return;
  }
  op_->resolvent_into(lambda, x, out);
}

double MonotoneOperator::domain_distance(const Eigen::VectorXd& x) const {
  switch (kind_) {
    case Kind::NormalCone:
      return set_->distance(x);
    case Kind::Custom:
      return custom_domain_ ? custom_domain_(x) : 0.0;
    default:
      return 0.0;
  }
}

bool MonotoneOperator::domain_contains(const Eigen::VectorXd& x, double tol) const {
  return domain_distance(x) <= tol;
}

GraphPair sample_graph_pair(const MonotoneOperator& op, NoiseStream& rng,
                            double radius) {
  Eigen::VectorXd anchor(op.dim());
  rng.gaussian_fill(anchor);
  anchor *= radius * rng.uniform01();
  // lambda log-uniform in [1e-2, 1e1]
  const double lambda = std::pow(10.0, -2.0 + 3.0 * rng.uniform01());
  GraphPair pair;
  pair.point = op.resolvent(lambda, anchor);
  pair.value = (anchor - pair.point) / lambda;
  return pair;
}

MonotoneReport check_monotone(const MonotoneOperator& op, int n_samples,
                              std::uint64_t seed, double tol, double radius) {
  if (n_samples < 1) n_samples = 1;
  NoiseStream rng(seed, /*stream_id=*/0xC0FFEE);

  double min_ip = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n_samples; ++i) {
    const GraphPair a = sample_graph_pair(op, rng, radius);
    const GraphPair b = sample_graph_pair(op, rng, radius);
    const double ip = (a.point - b.point).dot(a.value - b.value);
    if (!std::isfinite(ip)) {
      min_ip = -std::numeric_limits<double>::infinity();
      break;
    }
    min_ip = std::min(min_ip, ip);
  }
  return MonotoneReport{min_ip, min_ip >= -tol};
}

}  // namespace hlab
