#include "hlab/convex_set.hpp"

#include <limits>

#include "hlab/errors.hpp"

namespace hlab {

ConvexSet ConvexSet::halfspace(Eigen::VectorXd normal, double offset) {
  if (normal.size() == 0 || normal.norm() == 0.0)
    fail(ErrorCode::Validation, "halfspace normal must be nonzero");
  ConvexSet s(Kind::Halfspace, static_cast<int>(normal.size()));
  s.a_ = std::move(normal);
  s.scalar_ = offset;
  s.normal_sq_ = s.a_.squaredNorm();
  return s;
}

ConvexSet ConvexSet::box(Eigen::VectorXd lower, Eigen::VectorXd upper) {
  if (lower.size() != upper.size())
    fail(ErrorCode::DimensionMismatch, "box bounds disagree in dimension");
  if ((lower.array() > upper.array()).any())
    fail(ErrorCode::Validation, "box requires lower <= upper componentwise");
  ConvexSet s(Kind::Box, static_cast<int>(lower.size()));
  s.a_ = std::move(lower);
  s.b_ = std::move(upper);
  return s;
}

ConvexSet ConvexSet::ball(Eigen::VectorXd center, double radius) {
  if (radius <= 0.0) fail(ErrorCode::Validation, "ball radius must be positive");
  ConvexSet s(Kind::Ball, static_cast<int>(center.size()));
  s.a_ = std::move(center);
  s.scalar_ = radius;
  return s;
}

void ConvexSet::project_into(const Eigen::VectorXd& x, Eigen::VectorXd& out) const {
  if (x.size() != dim_) fail(ErrorCode::DimensionMismatch, "point dimension mismatch");
  switch (kind_) {
    case Kind::Halfspace: {
      const double violation = a_.dot(x) - scalar_;
      if (violation >= 0.0) {
        out = x;
      } else {
        out = x - (violation / normal_sq_) * a_;
      }
      return;
    }
    case Kind::Box:
      out = x.cwiseMax(a_).cwiseMin(b_);
      return;
    case Kind::Ball: {
      const double dist = (x - a_).norm();
      if (dist <= scalar_) {
        out = x;
      } else {
        out = a_ + (scalar_ / dist) * (x - a_);
      }
      return;
    }
  }
}

Eigen::VectorXd ConvexSet::project(const Eigen::VectorXd& x) const {
  Eigen::VectorXd out(dim_);
  project_into(x, out);
  return out;
}

double ConvexSet::distance(const Eigen::VectorXd& x) const {
  switch (kind_) {
    case Kind::Halfspace: {
      const double violation = a_.dot(x) - scalar_;
      return violation >= 0.0 ? 0.0 : -violation / a_.norm();
    }
    case Kind::Box: {
      const Eigen::VectorXd p = x.cwiseMax(a_).cwiseMin(b_);
      return (x - p).norm();
    }
    case Kind::Ball:
      return std::max(0.0, (x - a_).norm() - scalar_);
  }
  return 0.0;
}

bool ConvexSet::contains(const Eigen::VectorXd& x, double tol) const {
  return distance(x) <= tol;
}

bool ConvexSet::contains_zero_interior() const {
  switch (kind_) {
    case Kind::Halfspace:
      // interior is n.x > c; at the origin that reads 0 > c
      return scalar_ < 0.0;
    case Kind::Box:
      return (a_.array() < 0.0).all() && (b_.array() > 0.0).all();
    case Kind::Ball:
      return a_.norm() < scalar_;
  }
  return false;
}

bool ConvexSet::has_interior() const {
  switch (kind_) {
    case Kind::Halfspace:
    case Kind::Ball:
      return true;
    case Kind::Box:
      return (a_.array() < b_.array()).all();
  }
  return false;
}

double ConvexSet::zero_interior_margin() const {
  switch (kind_) {
    case Kind::Halfspace:
      return -scalar_ / a_.norm();
    case Kind::Box: {
      double m = std::numeric_limits<double>::infinity();
      for (int i = 0; i < dim_; ++i) m = std::min({m, -a_[i], b_[i]});
      return m;
    }
    case Kind::Ball:
      return scalar_ - a_.norm();
  }
  return 0.0;
}

bool contains_zero_interior(const ConvexSet& set) { return set.contains_zero_interior(); }

}  // namespace hlab
