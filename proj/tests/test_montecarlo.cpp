#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "hlab/bounds.hpp"
#include "hlab/errors.hpp"
#include "hlab/montecarlo.hpp"
#include "fixtures.hpp"

using namespace hlab;
using hlab::testing::ou_exp_moment;
using hlab::testing::reflected_ou;
using hlab::testing::scalar_linear;
using hlab::testing::vec1;

namespace {

TestFunction constant_one() {
  return TestFunction::bounded_lipschitz([](const Eigen::VectorXd&) { return 1.0; },
                                         1.0, 1.0, 0.0, "one");
}

TestFunction decaying_exp() { return TestFunction::exp_linear(vec1(-0.5)); }

}  // namespace

TEST_CASE("constant test function gives stderr exactly zero") {
  const auto est = estimate_semigroup(reflected_ou(), vec1(1.0), 0.5, constant_one(),
                                      500, 1e-2, 7);
  CHECK(est.mean == 1.0);
  CHECK(est.se == 0.0);
  CHECK(est.n == 500);
}

TEST_CASE("zero horizon returns f(x) exactly") {
  const auto est = estimate_semigroup(reflected_ou(), vec1(1.0), 0.0, decaying_exp(),
                                      100, 1e-2, 7);
  CHECK(est.mean == doctest::Approx(std::exp(-0.5)).epsilon(1e-15));
  CHECK(est.se == 0.0);
}

TEST_CASE("scalar OU matches the Gaussian closed form") {
  // A=0, B=-x: P_T e^{lambda .}(x) = exp(lambda x e^{-T} + lambda^2 v_T / 2)
  const auto scn = scalar_linear(-1.0);
  const double lambda = 0.5, x = 1.0, T = 1.0;
  const auto est = estimate_semigroup(scn, vec1(x), T, TestFunction::exp_linear(vec1(lambda)),
                                      4000, 1e-3, 11);
  const double exact = ou_exp_moment(lambda, x, -1.0, T);
  CHECK(std::abs(est.mean - exact) <= 3.0 * est.se);
  CHECK(est.se > 0.0);
}

TEST_CASE("estimates are reproducible across worker counts") {
  const auto scn = reflected_ou();
  for (int threads : {1, 2, 4}) {
    MonteCarloOptions opt{threads};
    const auto est = estimate_semigroup(scn, vec1(1.0), 0.5, decaying_exp(), 1000,
                                        1e-2, 3, opt);
    static double first_mean = est.mean, first_se = est.se;
    CHECK(est.mean == first_mean);
    CHECK(est.se == first_se);
  }
}

TEST_CASE("confidence intervals cover the closed form") {
  // 200 independent harness runs on the scalar OU; 3 sigma should cover
  // in at least 99% of them (bias at h=1e-3 is far below the noise).
  const auto scn = scalar_linear(-1.0);
  const double lambda = 0.5, x = 0.3, T = 0.5;
  const double exact = ou_exp_moment(lambda, x, -1.0, T);
  int covered = 0;
  for (int run = 0; run < 200; ++run) {
    const auto est = estimate_semigroup(scn, vec1(x), T,
                                        TestFunction::exp_linear(vec1(lambda)), 300,
                                        1e-3, 1000 + 7919 * run);
    if (std::abs(est.mean - exact) <= 3.0 * est.se) ++covered;
  }
  CHECK(covered >= 198);
}

TEST_CASE("coincident starts reduce to exact sample Jensen") {
  const auto scn = reflected_ou();
  const auto f = TestFunction::smooth_indicator(vec1(0.25), 0.25, 0.25);
  const auto rep = verify_harnack(scn, vec1(0.5), vec1(0.5), 0.5, 2.0, f, 500, 2e-3, 5);
  CHECK(rep.verdict == Verdict::Holds);
  CHECK(rep.rhs_log_factor == 0.0);
  CHECK(rep.rhs_log >= rep.lhs_log);  // power-mean inequality on the same samples
}

TEST_CASE("harnack holds on the reflected OU and flips when theta shrinks") {
  const auto scn = reflected_ou();
  // Steep low-amplitude sigmoid: small convexity gap, visible mean shift,
  // the most falsification-sensitive admissible observable.
  const double mid = 1.5 * std::exp(-1.0);
  const auto f = TestFunction::bounded_lipschitz(
      [mid](const Eigen::VectorXd& x) {
        return 1.0 + 0.5 / (1.0 + std::exp(-8.0 * (x[0] - mid)));
      },
      1.5, 1.0, 1.0, "steep_sigmoid");
  const auto honest = verify_harnack(scn, vec1(2.0), vec1(1.0), 0.5, 4.0, f,
                                     4000, 2e-3, 99);
  CHECK(honest.verdict == Verdict::Holds);

  // theta/1000 drops the prefactor below the scenario's sharp Gaussian
  // constant and must be caught; theta/100 still sits (barely) above the
  // sharp constant for this scenario, so it stays un-falsifiable.
  const auto corrupted = verify_harnack(scn, vec1(2.0), vec1(1.0), 0.5, 4.0, f,
                                        10000, 2e-3, 99, {}, 1e-3);
  CHECK(corrupted.verdict == Verdict::Violated);
}

TEST_CASE("harnack rejects bad inputs") {
  const auto scn = reflected_ou();
  const auto f = TestFunction::smooth_indicator(vec1(0.0), 0.25, 0.25);
  CHECK_THROWS_AS(verify_harnack(scn, vec1(0.0), vec1(1.0), 0.5, 1.0, f, 100, 2e-3, 1),
                  LabError);
  // growing exponential is unbounded on [0, inf)
  CHECK_THROWS_AS(verify_harnack(scn, vec1(0.0), vec1(1.0), 0.5, 2.0,
                                 TestFunction::exp_linear(vec1(0.5)), 100, 2e-3, 1),
                  LabError);
}

TEST_CASE("scalar OU harnack report via the monotone-drift constant") {
  // Both sides in closed form through the Gaussian mgf; the report built
  // from MC samples must agree with verdict "holds".
  const auto scn = scalar_linear(-1.0);
  const double lambda = 0.5, T = 1.0, alpha = 2.0;
  const double dist = 1.0;
  const auto samples_x = semigroup_samples(scn, vec1(1.0), T, 4000, 1e-3, 13);
  const auto samples_y = semigroup_samples(scn, vec1(0.0), T, 4000, 1e-3, 13);
  const double log_pref = msde_harnack_log_constant(alpha, -1.0, T, dist);
  const auto rep = make_harnack_report(samples_x, samples_y,
                                       TestFunction::exp_linear(vec1(lambda)), alpha,
                                       log_pref);
  CHECK(rep.verdict == Verdict::Holds);

  // closed-form slack of the same inequality is nonnegative
  const double lhs_log = alpha * std::log(ou_exp_moment(lambda, 1.0, -1.0, T));
  const double rhs_log = log_pref + std::log(ou_exp_moment(alpha * lambda, 0.0, -1.0, T));
  CHECK(rhs_log - lhs_log >= -1e-12);
  CHECK(std::abs(rep.lhs_log - lhs_log) <= 0.05);
  CHECK(std::abs(rep.rhs_log - rhs_log) <= 0.05);
}

TEST_CASE("log harnack holds and guards f >= 1") {
  const auto scn = reflected_ou();
  const auto f = TestFunction::smooth_indicator(vec1(0.5), 0.5, 0.3);
  const auto rep = verify_log_harnack(scn, vec1(1.0), vec1(0.0), 1.0, f, 2000, 2e-3, 17);
  CHECK(rep.verdict == Verdict::Holds);

  const auto same = verify_log_harnack(scn, vec1(0.7), vec1(0.7), 1.0, f, 500, 2e-3, 17);
  CHECK(same.verdict == Verdict::Holds);  // Jensen at x = y

  CHECK_THROWS_AS(verify_log_harnack(scn, vec1(1.0), vec1(0.0), 1.0, decaying_exp(),
                                     100, 2e-3, 1),
                  LabError);
  try {
    verify_log_harnack(scn, vec1(1.0), vec1(0.0), 1.0, decaying_exp(), 100, 2e-3, 1);
  } catch (const LabError& e) {
    CHECK(e.code() == ErrorCode::FunctionBelowOne);
  }
}

TEST_CASE("girsanov identities at coincident starts are exact") {
  const auto scn = reflected_ou();
  const auto rep = verify_girsanov(scn, vec1(0.5), vec1(0.5), 0.5, decaying_exp(),
                                   200, 2e-3, 23);
  CHECK(rep.pass);
  CHECK(rep.mean_r.mean == 1.0);
  CHECK(rep.mean_r.se == 0.0);
  CHECK(rep.transfer_gap == 0.0);  // same streams drive both ensembles
  CHECK(rep.coupled_fraction == 1.0);
}

TEST_CASE("girsanov mass and transfer pass on the reflected OU") {
  const auto scn = reflected_ou();
  const auto rep = verify_girsanov(scn, vec1(1.0), vec1(0.0), 1.0, decaying_exp(),
                                   2000, 1e-3, 29);
  CHECK(rep.pass);
  CHECK(rep.coupled_fraction == 1.0);
  CHECK(std::abs(rep.mean_r.mean - 1.0) <= 3.0 * rep.mean_r.se);
}

TEST_CASE("strong feller bound with common random numbers") {
  const auto scn = reflected_ou();
  const auto f = TestFunction::smooth_indicator(vec1(0.5), 0.3, 0.3);
  const auto rep = verify_strong_feller(scn, vec1(0.6), vec1(0.5), 1.0, f, 2000, 2e-3, 31);
  CHECK(rep.pass);
  CHECK(rep.lhs < rep.rhs);

  CHECK_THROWS_AS(verify_strong_feller(scn, vec1(0.6), vec1(0.5), 1.0,
                                       TestFunction::exp_linear(vec1(1.0)), 100, 2e-3, 1),
                  LabError);
}

TEST_CASE("point violations inside the noise band stay inconclusive") {
  // Hand-built ensembles: the point estimates violate the bound but two
  // samples leave CIs wide, so the verdict must not claim violation.
  const auto f = TestFunction::bounded_lipschitz(
      [](const Eigen::VectorXd& v) { return 1.0 + 0.1 * v[0]; }, 2.0, 1.0, 0.1, "lin");
  const std::vector<Eigen::VectorXd> samples_x{vec1(1.0), vec1(3.0)};
  const std::vector<Eigen::VectorXd> samples_y{vec1(0.0), vec1(0.5)};
  const auto rep = make_harnack_report(samples_x, samples_y, f, 2.0, 0.0);
  CHECK(rep.lhs_log > rep.rhs_log);  // point-level violation
  CHECK(rep.verdict == Verdict::Inconclusive);
  CHECK(rep.slack >= 0.0);  // CI-adjusted margin stays open
}

TEST_CASE("pairing changes the spread, not the estimand") {
  const auto scn = reflected_ou();
  const auto f = TestFunction::smooth_indicator(vec1(0.5), 0.3, 0.3);
  // paired difference vs independent-stream difference
  const auto paired = verify_strong_feller(scn, vec1(1.0), vec1(0.5), 1.0, f, 4000,
                                           2e-3, 41);
  const auto at_x = estimate_semigroup(scn, vec1(1.0), 1.0, f, 4000, 2e-3, 1041);
  const auto at_y = estimate_semigroup(scn, vec1(0.5), 1.0, f, 4000, 2e-3, 2041);
  const double indep_diff = at_x.mean - at_y.mean;
  const double combined =
      std::sqrt(at_x.se * at_x.se + at_y.se * at_y.se +
                paired.lhs_diff.se * paired.lhs_diff.se);
  CHECK(std::abs(paired.lhs_diff.mean - indep_diff) <= 3.0 * combined);
  CHECK(paired.lhs_diff.se < std::hypot(at_x.se, at_y.se));  // the point of CRN
}
