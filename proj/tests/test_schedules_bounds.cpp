#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "hlab/bounds.hpp"
#include "hlab/errors.hpp"
#include "hlab/numerics.hpp"
#include "hlab/schedules.hpp"
#include "fixtures.hpp"

using namespace hlab;
using hlab::testing::reflected_ou;

TEST_CASE("zeta schedules evaluate and integrate exactly") {
  const auto constant = ZetaSchedule::constant(1.5);
  CHECK(constant(0.0) == 1.5);
  CHECK(constant(100.0) == 1.5);
  CHECK(constant.weighted_exp_integral(0.0, 2.0) == doctest::Approx(3.0));

  const auto pw = ZetaSchedule::piecewise_constant({1.0, 2.0}, {1.0, 2.0, 0.5});
  CHECK(pw(0.5) == 1.0);
  CHECK(pw(1.0) == 2.0);
  CHECK(pw(1.999) == 2.0);
  CHECK(pw(2.0) == 0.5);
  CHECK_THROWS_AS(pw.constant_value(), LabError);

  // cross-check the exact piecewise integral against Simpson
  for (double c : {0.0, -0.7, 1.3}) {
    for (int power : {1, 2}) {
      const double exact = pw.weighted_exp_integral(c, 3.0, power);
      double simp = 0.0;
      for (auto [lo, hi] : {std::pair{0.0, 1.0}, {1.0, 2.0}, {2.0, 3.0}}) {
        simp += simpson(
            [&](double t) {
              const double z = pw(std::min(t, hi - 1e-12));
              return (power == 2 ? z * z : z) * std::exp(-c * t);
            },
            lo, hi, 512);
      }
      CHECK(exact == doctest::Approx(simp).epsilon(1e-9));
    }
  }
}

TEST_CASE("xi schedule values and normalization") {
  CHECK(make_xi_schedule(0.0, 2.0)(0.7) == doctest::Approx(0.5));
  // quadrature oracle for int_0^T e^{-2 omega s} ds
  for (double omega : {1.0, -1.0}) {
    const auto xi = make_xi_schedule(omega, 1.0);
    const double denom = simpson([&](double s) { return std::exp(-2.0 * omega * s); },
                                 0.0, 1.0, 1024);
    CHECK(xi(0.0) == doctest::Approx(1.0 / denom).epsilon(1e-10));
    // normalization: int_0^T xi_t e^{-omega t} dt = 1
    const double mass =
        simpson([&](double t) { return xi(t) * std::exp(-omega * t); }, 0.0, 1.0, 1024);
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-10));
  }
  CHECK(make_xi_schedule(1.0, 1.0)(0.0) == doctest::Approx(2.3130).epsilon(1e-4));
  CHECK(make_xi_schedule(-1.0, 1.0)(0.0) == doctest::Approx(0.3130).epsilon(1e-3));
}

TEST_CASE("delta exponent") {
  CHECK(delta_exponent(2.0, 0.0) == doctest::Approx(0.5));
  CHECK(delta_exponent(2.0, 2.0) == doctest::Approx(2.0 / 3.0));
  CHECK(delta_exponent(4.0, 0.0) == doctest::Approx(0.0));  // degenerate boundary
  CHECK_THROWS_AS(delta_exponent(0.5, 0.0), LabError);
  CHECK_THROWS_AS(delta_exponent(5.0, 0.5), LabError);  // r < q-4
  CHECK_THROWS_AS(delta_exponent(2.0, -0.1), LabError);
}

TEST_CASE("theta quadrature reference values") {
  auto scn = reflected_ou();  // gamma=1, omega=0, q=2, r=0, zeta=1
  CHECK(theta_quadrature(scn, 1.0) == doctest::Approx(32.0).epsilon(1e-12));

  // doubling gamma at r=0 halves theta
  auto scn2 = scn;
  scn2.drift.with_constants(2.0, 0.0, 2.0, 2.0);
  CHECK(theta_quadrature(scn2, 1.0) == doctest::Approx(16.0).epsilon(1e-12));

  // r=0 kills the numerator integral: piecewise zeta with the same
  // denominator integral gives the same theta
  auto scn3 = scn;
  scn3.zeta = ZetaSchedule::piecewise_constant({0.5}, {0.5, 1.5});  // mean 1 on [0,1]
  const double i1 = scn3.zeta.weighted_exp_integral(0.0, 1.0, 1);
  CHECK(i1 == doctest::Approx(1.0));
  CHECK(theta_quadrature(scn3, 1.0) == doctest::Approx(32.0).epsilon(1e-9));
}

TEST_CASE("theta closed form agrees with quadrature over a grid") {
  int combos = 0;
  for (double T : {0.25, 0.5, 1.0, 2.0}) {
    for (double omega : {-1.0, -1e-12, 0.0, 1e-12, 1.0}) {
      for (double gamma : {0.5, 2.0}) {
        for (auto [q, r] : {std::pair{2.0, 0.0}, {2.0, 2.0}, {3.0, 1.0}}) {
          for (double zeta : {0.5, 1.0}) {
            auto scn = reflected_ou();
            scn.drift.with_constants(gamma, omega, q, 2.0);
            scn.r = r;
            scn.zeta = ZetaSchedule::constant(zeta);
            const double a = theta_quadrature(scn, T);
            const double b = theta_closed_form(scn, T);
            CHECK(std::abs(a - b) <= 1e-8 * std::abs(b));
            ++combos;
          }
        }
      }
    }
  }
  CHECK(combos >= 100);
}

TEST_CASE("theta closed form limits") {
  auto scn = reflected_ou();
  // omega -> 0: theta = 32 / T^2 for q=2, r=0, zeta=gamma=1
  CHECK(theta_closed_form(scn, 2.0) == doctest::Approx(8.0));

  // positive omega: finite plateau 4 delta^{-1} omega^{(4+r)/(2+r)} as T grows
  auto scn_pos = scn;
  scn_pos.drift.with_constants(1.0, 0.5, 2.0, 2.0);
  const double plateau = 4.0 / 0.5 * std::pow(0.5, 2.0);
  CHECK(theta_closed_form(scn_pos, 500.0) == doctest::Approx(plateau).epsilon(1e-6));

  // negative omega: theta -> 0 as T grows
  auto scn_neg = scn;
  scn_neg.drift.with_constants(1.0, -1.0, 2.0, 2.0);
  CHECK(theta_closed_form(scn_neg, 100.0) < 1e-15);

  // piecewise zeta is rejected
  auto scn_pw = scn;
  scn_pw.zeta = ZetaSchedule::piecewise_constant({1.0}, {1.0, 2.0});
  CHECK_THROWS_AS(theta_closed_form(scn_pw, 1.0), LabError);
}

TEST_CASE("omega continuity of the bound evaluators") {
  auto scn0 = reflected_ou();
  auto scn_eps = reflected_ou();
  for (double eps : {1e-12, -1e-12}) {
    scn_eps.drift.with_constants(1.0, eps, 2.0, 2.0);
    CHECK(std::abs(theta_closed_form(scn_eps, 1.0) - theta_closed_form(scn0, 1.0)) <=
          1e-9 * theta_closed_form(scn0, 1.0));
    CHECK(std::abs(msde_harnack_log_constant(2.0, eps, 1.0, 1.0) -
                   msde_harnack_log_constant(2.0, 0.0, 1.0, 1.0)) <= 1e-9);
  }
}

TEST_CASE("harnack prefactor") {
  HarnackBound bound{32.0, 2.0, 0.0, 2.0};
  CHECK(bound.log_prefactor(0.0) == 0.0);
  CHECK(bound.log_prefactor(1.0) == doctest::Approx(32.0));  // alpha/(2(alpha-1)) = 1
  // decreasing in alpha toward theta/2
  HarnackBound big_alpha{32.0, 2.0, 0.0, 1e9};
  CHECK(big_alpha.log_prefactor(1.0) == doctest::Approx(16.0).epsilon(1e-6));
  double prev = 1e300;
  for (double alpha : {1.5, 2.0, 4.0, 16.0}) {
    HarnackBound b{32.0, 2.0, 0.0, alpha};
    CHECK(b.log_prefactor(0.7) < prev);
    prev = b.log_prefactor(0.7);
  }
  CHECK_THROWS_AS((HarnackBound{32.0, 2.0, 0.0, 1.0}.log_prefactor(1.0)), LabError);

  Eigen::VectorXd x = hlab::testing::vec1(1.0), y = hlab::testing::vec1(1.0);
  CHECK(harnack_rhs(bound, x, y, 3.25) == doctest::Approx(3.25));
}

TEST_CASE("msde harnack log constant") {
  CHECK(msde_harnack_log_constant(2.0, 0.0, 1.0, 1.0) == doctest::Approx(1.0));
  CHECK(msde_harnack_log_constant(2.0, 1.0, 1.0, 1.0) ==
        doctest::Approx(2.0 / (1.0 - std::exp(-2.0))).epsilon(1e-12));
  CHECK(msde_harnack_log_constant(2.0, 1.0, 1.0, 0.0) == 0.0);
  // oracle: small-omega evaluation approaches the omega=0 branch
  CHECK(msde_harnack_log_constant(2.0, 1e-8, 1.0, 1.0) ==
        doctest::Approx(1.0).epsilon(1e-7));
  CHECK_THROWS_AS(msde_harnack_log_constant(1.0, 0.0, 1.0, 1.0), LabError);
}

TEST_CASE("strong feller rhs") {
  CHECK(strong_feller_rhs(32.0, 0.0, 2.0, 0.0, 1.0) == 0.0);
  const double v = strong_feller_rhs(32.0, 0.1, 2.0, 0.0, 1.0);
  CHECK(v == doctest::Approx(std::sqrt(32.0) * 0.1 * std::exp(16.0 * 0.01)).epsilon(1e-12));
  CHECK(v == doctest::Approx(0.664).epsilon(1e-2));
  double prev = 0.0;
  for (double dist : {0.05, 0.1, 0.2, 0.5, 1.0}) {
    const double cur = strong_feller_rhs(32.0, dist, 2.0, 0.0, 1.0);
    CHECK(cur > prev);
    prev = cur;
  }
  CHECK_THROWS_AS(strong_feller_rhs(32.0, 0.1, 4.0, 0.0, 1.0), LabError);
}

TEST_CASE("log harnack rhs") {
  CHECK(log_harnack_rhs(32.0, 0.0, 2.0, 0.0, -0.3) == doctest::Approx(-0.3));
  CHECK(log_harnack_rhs(32.0, 1.0, 2.0, 0.0, 0.0) == doctest::Approx(16.0));
  // quadratic distance scaling at q=2, r=0
  CHECK(log_harnack_rhs(32.0, 2.0, 2.0, 0.0, 0.0) ==
        doctest::Approx(4.0 * log_harnack_rhs(32.0, 1.0, 2.0, 0.0, 0.0)));
}

TEST_CASE("theta monotone in gamma and zeta") {
  auto base = reflected_ou();
  double prev = 1e300;
  for (double gamma : {0.5, 1.0, 2.0, 4.0}) {
    auto scn = base;
    scn.drift.with_constants(gamma, 0.0, 2.0, 2.0);
    const double theta = theta_closed_form(scn, 1.0);
    CHECK(theta < prev);
    prev = theta;
  }
  prev = 1e300;
  for (double zeta : {0.5, 1.0, 2.0, 4.0}) {
    auto scn = base;
    scn.zeta = ZetaSchedule::constant(zeta);
    const double theta = theta_closed_form(scn, 1.0);
    CHECK(theta < prev);
    prev = theta;
  }
}
