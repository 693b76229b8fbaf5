#pragma once

#include <Eigen/Dense>
#include <functional>
#include <memory>
#include <optional>

#include "hlab/convex_set.hpp"
#include "hlab/rng.hpp"

namespace hlab {

/// Maximal monotone operator on R^d, accessed only through its resolvent
/// J_lambda = (I + lambda A)^{-1}. The enumerated kinds cover everything
/// the integrator needs; Custom is the extension point for user-supplied
/// resolvents obeying the same contract (firm nonexpansiveness and
/// z + lambda*a = x with a in A(z)).
class MonotoneOperator {
 public:
  enum class Kind { Zero, NormalCone, LinearPsd, ScaledSubgradientAbs, Custom };

  /// Resolvent callback: (lambda, x) -> z. Optional domain distance
  /// callback for membership checks; defaults to "everywhere".
  using ResolventFn = std::function<Eigen::VectorXd(double, const Eigen::VectorXd&)>;
  using DomainDistanceFn = std::function<double(const Eigen::VectorXd&)>;

  static MonotoneOperator zero(int dim);
  static MonotoneOperator normal_cone(ConvexSet set);
  /// A x = {M x}. Positive semidefiniteness is a declared property
  /// verified by check_monotone, not enforced at construction.
  static MonotoneOperator linear_psd(Eigen::MatrixXd matrix);
  /// Subgradient of w*|.|_1; resolvent is the componentwise soft threshold.
  static MonotoneOperator scaled_subgradient_abs(double weight, int dim);
  static MonotoneOperator custom(int dim, ResolventFn resolvent,
                                 DomainDistanceFn domain_distance = nullptr);

  Kind kind() const { return kind_; }
  int dim() const { return dim_; }
  const ConvexSet* set() const { return set_ ? &*set_ : nullptr; }
  const Eigen::MatrixXd& matrix() const { return matrix_; }
  double weight() const { return weight_; }

  /// J_lambda(x): the unique z with z + lambda*a = x for some a in A(z).
  Eigen::VectorXd resolvent(double lambda, const Eigen::VectorXd& x) const;
  void resolvent_into(double lambda, const Eigen::VectorXd& x, Eigen::VectorXd& out) const;

  /// Yosida approximation A_lambda(x) = (x - J_lambda x)/lambda, a
  /// selection of A at J_lambda x.
  Eigen::VectorXd yosida(double lambda, const Eigen::VectorXd& x) const;

  /// Distance from x to closure(D(A)); 0 for full-domain kinds.
  double domain_distance(const Eigen::VectorXd& x) const;
  bool domain_contains(const Eigen::VectorXd& x, double tol) const;

 private:
  friend class ResolventContext;
  explicit MonotoneOperator(Kind kind, int dim) : kind_(kind), dim_(dim) {}

  Kind kind_;
  int dim_;
  std::optional<ConvexSet> set_;
  Eigen::MatrixXd matrix_;
  double weight_ = 0.0;
  ResolventFn custom_resolvent_;
  DomainDistanceFn custom_domain_;
};

/// Workspace for repeated resolvent evaluations inside a stepping loop.
/// Caches the linear-kind factorization per step size; owned by one loop,
/// never shared between threads (the operator itself stays immutable).
class ResolventContext {
 public:
  explicit ResolventContext(const MonotoneOperator& op) : op_(&op) {}

  void apply(double lambda, const Eigen::VectorXd& x, Eigen::VectorXd& out);

 private:
  const MonotoneOperator* op_;
  double cached_lambda_ = -1.0;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
};

/// One sampled element of the graph of A: value is a selection from
/// A(point). Produced through the resolvent, which is the only access
/// path to A: point = J_lambda(x), value = (x - point)/lambda.
struct GraphPair {
  Eigen::VectorXd point;
  Eigen::VectorXd value;
};

/// Samples a graph pair at a random anchor of the given radius and a
/// log-uniform resolvent scale.
GraphPair sample_graph_pair(const MonotoneOperator& op, NoiseStream& rng,
                            double radius = 10.0);

struct MonotoneReport {
  double min_inner_product = 0.0;
  bool pass = false;
};

/// Spot check of graph monotonicity: samples graph pairs via
/// (resolvent, yosida) at random points/scales and reports the smallest
/// <x1 - x2, y1 - y2>. Pass iff min >= -tol.
MonotoneReport check_monotone(const MonotoneOperator& op, int n_samples,
                              std::uint64_t seed, double tol = 1e-10,
                              double radius = 10.0);

}  // namespace hlab
