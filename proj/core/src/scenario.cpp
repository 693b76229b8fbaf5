#include "hlab/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hlab/errors.hpp"
#include "hlab/rng.hpp"

namespace hlab {

double delta_exponent(double q, double r) {
  if (q <= 1.0 || r < 0.0 || r < q - 4.0)
    fail(ErrorCode::InvalidExponents, "need q > 1 and r >= max(0, q-4)");
  return 1.0 - q / (4.0 + r);
}

void Scenario::check_shapes() const {
  if (op.dim() != dim || drift.dim() != dim || diffusion.dim() != dim)
    fail(ErrorCode::DimensionMismatch, "operator/drift/diffusion dimensions disagree");
}

namespace {

constexpr double kSlackTol = 1e-8;

/// Uniform point in the ball of the given radius.
Eigen::VectorXd sample_ball(NoiseStream& rng, int dim, double radius) {
  Eigen::VectorXd x(dim);
  rng.gaussian_fill(x);
  const double norm = x.norm();
  if (norm == 0.0) return Eigen::VectorXd::Zero(dim);
  const double u = std::pow(rng.uniform01(), 1.0 / dim);
  return (radius * u / norm) * x;
}

HypothesisCheck check_constants(const Scenario& s) {
  HypothesisCheck c;
  c.pass = true;
  c.worst_slack = std::numeric_limits<double>::infinity();
  auto require = [&](bool ok, double slack, const char* what) {
    c.worst_slack = std::min(c.worst_slack, slack);
    if (!ok) {
      c.pass = false;
      if (!c.note.empty()) c.note += "; ";
      c.note += what;
    }
  };
  require(s.q() > 1.0, s.q() - 1.0, "q must exceed 1");
  require(s.gamma() > 0.0, s.gamma(), "gamma must be positive");
  require(s.r >= 0.0 && s.r >= s.q() - 4.0, std::min(s.r, s.r - (s.q() - 4.0)),
          "r must satisfy r >= max(0, q-4)");
  require(s.lambda_embed > 0.0, s.lambda_embed, "lambda_embed must be positive");
  require(s.c_sigma > 0.0, s.c_sigma, "C_sigma must be positive");
  // zeta positivity on a coarse grid (construction already enforces it)
  double zmin = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= 64; ++i) zmin = std::min(zmin, s.zeta(i * 0.25));
  require(zmin > 0.0, zmin, "zeta must be strictly positive");
  return c;
}

HypothesisCheck check_h1(const Scenario& s) {
  // The interior-origin requirement is a translational normalization of
  // the underlying existence theory; what matters is a nonempty interior
  // with the origin reachable. Strict interiority passes silently, a
  // boundary origin passes with a note, anything else fails.
  HypothesisCheck c;
  if (const ConvexSet* set = s.op.set()) {
    c.worst_slack = set->zero_interior_margin();
    if (set->contains_zero_interior()) {
      c.pass = true;
    } else if (set->has_interior() && set->contains(Eigen::VectorXd::Zero(s.dim), 1e-12)) {
      c.pass = true;
      c.note = "origin on the boundary of D(A); interior nonempty (holds after translation)";
    } else {
      c.pass = false;
      c.note = set->has_interior() ? "origin outside closure(D(A))" : "D(A) has empty interior";
    }
  } else {
    c.pass = true;  // D(A) = R^d
    c.worst_slack = std::numeric_limits<double>::infinity();
  }
  return c;
}

HypothesisCheck check_h2(const Scenario& s, NoiseStream& rng, int n, double radius) {
  // Hemicontinuity of eps -> <x, B(y + eps z)>: compare shrinking
  // perturbations; the deviation must vanish with the perturbation.
  HypothesisCheck c;
  c.pass = true;
  c.worst_slack = std::numeric_limits<double>::infinity();
  const int trials = std::max(8, n / 64);
  for (int i = 0; i < trials; ++i) {
    const Eigen::VectorXd x = sample_ball(rng, s.dim, radius);
    const Eigen::VectorXd y = sample_ball(rng, s.dim, radius);
    const Eigen::VectorXd z = sample_ball(rng, s.dim, radius);
    const double base = x.dot(s.drift(y));
    const double d1 = std::abs(x.dot(s.drift(y + 1e-5 * z)) - base);
    const double d2 = std::abs(x.dot(s.drift(y + 1e-7 * z)) - base);
    const double scale = 1.0 + std::abs(base);
    // d2 should be ~100x smaller than d1; allow generous headroom
    const double slack = 0.1 * d1 / scale + 1e-9 - d2 / scale;
    c.worst_slack = std::min(c.worst_slack, slack);
    if (slack < 0.0) {
      c.pass = false;
      c.note = "drift pairing not continuous under shrinking perturbations";
    }
  }
  return c;
}

HypothesisCheck check_h3(const Scenario& s, NoiseStream& rng, int n, double radius) {
  HypothesisCheck c;
  c.pass = true;
  c.worst_slack = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    const Eigen::VectorXd x = sample_ball(rng, s.dim, radius);
    const Eigen::VectorXd y = sample_ball(rng, s.dim, radius);
    const double pairing = (x - y).dot(s.drift(x) - s.drift(y));
    const double scale = 1.0 + (x - y).squaredNorm();
    const double slack = -pairing / scale;
    if (slack < c.worst_slack) c.worst_slack = slack;
    if (slack < -kSlackTol) {
      c.pass = false;
      c.note = "found <x-y, Bx-By> > 0";
    }
  }
  return c;
}

HypothesisCheck check_h4(const Scenario& s, NoiseStream& rng, int n, double radius) {
  HypothesisCheck c;
  c.pass = true;
  c.worst_slack = std::numeric_limits<double>::infinity();
  const double gamma = s.gamma(), omega = s.omega(), q = s.q();
  for (int i = 0; i < n; ++i) {
    const Eigen::VectorXd x = sample_ball(rng, s.dim, radius);
    const Eigen::VectorXd y = sample_ball(rng, s.dim, radius);
    const double dist = (x - y).norm();
    if (dist == 0.0) continue;
    const double pairing = (x - y).dot(s.drift(x) - s.drift(y));
    const double bound = -gamma * std::pow(dist, q) + omega * dist * dist;
    const double slack = (bound - pairing) / (1.0 + std::abs(bound));
    if (slack < c.worst_slack) c.worst_slack = slack;
    if (slack < -kSlackTol) {
      c.pass = false;
      c.note = "declared (gamma, omega, q) dissipativity violated";
    }
  }
  return c;
}

HypothesisCheck check_h5(const Scenario& s, NoiseStream& rng, int n, double radius) {
  HypothesisCheck c;
  c.pass = true;
  c.worst_slack = std::numeric_limits<double>::infinity();
  const double growth = s.drift.declared_growth(), q = s.q();
  for (int i = 0; i < n; ++i) {
    const Eigen::VectorXd x = sample_ball(rng, s.dim, radius);
    const double bound = growth * (1.0 + std::pow(x.norm(), q - 1.0));
    const double slack = (bound - s.drift(x).norm()) / (1.0 + bound);
    if (slack < c.worst_slack) c.worst_slack = slack;
    if (slack < -kSlackTol) {
      c.pass = false;
      c.note = "declared growth constant violated";
    }
  }
  return c;
}

HypothesisCheck check_h6(const Scenario& s) {
  HypothesisCheck c;
  const double residual = s.diffusion.inverse_residual();
  const double hs_slack = s.c_sigma - s.diffusion.hs_norm();
  c.pass = residual <= 1e-10 && hs_slack >= -kSlackTol;
  c.worst_slack = std::min(1e-10 - residual, hs_slack);
  if (!c.pass)
    c.note = residual > 1e-10 ? "sigma inverse residual too large"
                              : "Hilbert-Schmidt norm exceeds declared C_sigma";
  return c;
}

}  // namespace

ValidationReport validate(const Scenario& scenario, int n_samples, double radius,
                          std::uint64_t seed) {
  scenario.check_shapes();
  if (n_samples < 1) n_samples = 1;
  NoiseStream rng(seed, /*stream_id=*/0x5CE4A);

  ValidationReport report;
  report.per_hypothesis["constants"] = check_constants(scenario);
  report.per_hypothesis["H1"] = check_h1(scenario);
  report.per_hypothesis["H2"] = check_h2(scenario, rng, n_samples, radius);
  report.per_hypothesis["H3"] = check_h3(scenario, rng, n_samples, radius);
  report.per_hypothesis["H4"] = check_h4(scenario, rng, n_samples, radius);
  report.per_hypothesis["H5"] = check_h5(scenario, rng, n_samples, radius);
  report.per_hypothesis["H6prime"] = check_h6(scenario);

  report.pass = true;
  for (const auto& [name, check] : report.per_hypothesis)
    if (!check.pass) report.pass = false;
  return report;
}

ZetaAdmissibleReport zeta_admissible(const Scenario& scenario, int n_samples,
                                     std::uint64_t seed, double tol) {
  scenario.check_shapes();
  NoiseStream rng(seed, /*stream_id=*/0x2E7A);
  const double q = scenario.q(), r = scenario.r;

  // Time grid covering the schedule's structure; constants need one point.
  std::vector<double> times{0.0};
  for (double b : scenario.zeta.breakpoints()) {
    times.push_back(std::max(0.0, b - 1e-9));
    times.push_back(b);
  }
  if (!scenario.zeta.breakpoints().empty())
    times.push_back(scenario.zeta.breakpoints().back() + 1.0);

  double max_ratio = 0.0;
  for (int i = 0; i < std::max(1, n_samples); ++i) {
    const Eigen::VectorXd x = sample_ball(rng, scenario.dim, 10.0);
    const double norm = x.norm();
    if (norm == 0.0) continue;  // 0/0 excluded by convention
    const double intrinsic = scenario.diffusion.intrinsic_norm(x);
    for (double t : times) {
      const double z = scenario.zeta(t);
      const double lhs = z * z * std::pow(intrinsic, 2.0 + r) * std::pow(norm, q - 2.0 - r);
      const double rhs = std::pow(norm, q);  // |.|_V = |.|_H
      max_ratio = std::max(max_ratio, lhs / rhs);
    }
  }
  return ZetaAdmissibleReport{max_ratio, max_ratio <= 1.0 + tol};
}

}  // namespace hlab
