#pragma once

#include <Eigen/Dense>

namespace hlab {

/// Closed convex subset of R^d, one of: halfspace {x : n.x >= c},
/// axis-aligned box [lower, upper], or closed ball.
class ConvexSet {
 public:
  enum class Kind { Halfspace, Box, Ball };

  static ConvexSet halfspace(Eigen::VectorXd normal, double offset);
  static ConvexSet box(Eigen::VectorXd lower, Eigen::VectorXd upper);
  static ConvexSet ball(Eigen::VectorXd center, double radius);

  Kind kind() const { return kind_; }
  int dim() const { return dim_; }

  /// Euclidean projection onto the set.
  Eigen::VectorXd project(const Eigen::VectorXd& x) const;
  void project_into(const Eigen::VectorXd& x, Eigen::VectorXd& out) const;

  /// Distance to the set (0 for members).
  double distance(const Eigen::VectorXd& x) const;

  bool contains(const Eigen::VectorXd& x, double tol = 0.0) const;

  /// True iff the origin lies in the interior (strict inequalities).
  bool contains_zero_interior() const;

  /// True iff the set has nonempty interior.
  bool has_interior() const;

  /// Signed margin of the origin: distance to the boundary when interior
  /// (positive), 0 on the boundary, minus the distance when outside.
  double zero_interior_margin() const;

  // accessors for serialization / diagnostics
  const Eigen::VectorXd& normal() const { return a_; }
  double offset() const { return scalar_; }
  const Eigen::VectorXd& lower() const { return a_; }
  const Eigen::VectorXd& upper() const { return b_; }
  const Eigen::VectorXd& center() const { return a_; }
  double radius() const { return scalar_; }

 private:
  ConvexSet(Kind kind, int dim) : kind_(kind), dim_(dim) {}

  Kind kind_;
  int dim_;
  Eigen::VectorXd a_;    // normal / lower / center
  Eigen::VectorXd b_;    // upper
  double scalar_ = 0.0;  // offset / radius
  double normal_sq_ = 0.0;
};

/// Free-function form used by the hypothesis validator.
bool contains_zero_interior(const ConvexSet& set);

}  // namespace hlab
