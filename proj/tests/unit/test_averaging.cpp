#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"

#include "../oracles.hpp"
#include "esseek/averaging.hpp"
#include "esseek/bessel.hpp"
#include "esseek/errors.hpp"
#include "esseek/polynomial.hpp"

using namespace esseek;
using std::numbers::pi;
using std::numbers::sqrt2;

namespace {

AveragedState random_state(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  return {0.05 + 4.95 * u(rng), -1.2 + 2.4 * u(rng), -1.2 + 2.4 * u(rng), -pi + 2 * pi * u(rng), -2 + 4 * u(rng)};
}

}  // namespace

TEST_SUITE("bessel") {
  TEST_CASE("values at zero") {
    CHECK(bessel::j0(0.0) == 1.0);
    CHECK(bessel::j1(0.0) == 0.0);
  }

  TEST_CASE("agrees with the standard library") {
    for (double x = 0.0; x <= 50.0; x += 0.01) {
      CAPTURE(x);
      CHECK(std::fabs(bessel::j0(x) - std::cyl_bessel_j(0.0, x)) < 1e-12);
      CHECK(std::fabs(bessel::j1(x) - std::cyl_bessel_j(1.0, x)) < 1e-12);
    }
    CHECK(bessel::j1(-1.3) == doctest::Approx(-bessel::j1(1.3)));
    CHECK(bessel::j0(-1.3) == doctest::Approx(bessel::j0(1.3)));
  }

  TEST_CASE("first zero of J0 by bisection") {
    double lo = 2.0, hi = 3.0;
    for (int k = 0; k < 200; ++k) {
      const double mid = 0.5 * (lo + hi);
      (bessel::j0(mid) > 0 ? lo : hi) = mid;
    }
    CHECK(std::fabs(lo - 2.404825557695773) < 1e-10);
    CHECK(std::fabs(bessel::j0(2.404825557695773)) < 1e-10);
  }

  TEST_CASE("J1 is minus the derivative of J0") {
    for (double x : {0.5, 1.0, 2.0, 5.0}) {
      const double d = 1e-5;
      const double fd = (bessel::j0(x + d) - bessel::j0(x - d)) / (2 * d);
      CHECK(std::fabs(bessel::j1(x) + fd) < 1e-6);
    }
  }
}

TEST_SUITE("averaging") {
  TEST_CASE("xi averages at the origin and at theta = pi") {
    const double a = 2.0;
    auto x = xi_averages({1.0, 0.0, 0.0, 0.0, 0.0}, a);
    CHECK(x.c == doctest::Approx(bessel::j0(sqrt2 * a)));
    CHECK(std::fabs(x.c_sin) < 1e-15);
    CHECK(std::fabs(x.c_cos) < 1e-15);
    CHECK(std::fabs(x.cossin) < 1e-15);
    x = xi_averages({1.0, 0.0, 0.0, pi, 0.0}, a);
    CHECK(x.c == doctest::Approx(-bessel::j0(sqrt2 * a)));
  }

  TEST_CASE("closed forms match quadrature") {
    std::mt19937_64 rng(21);
    for (int k = 0; k < 40; ++k) {
      const auto s = random_state(rng);
      const double a = std::uniform_real_distribution<double>(0.3, 3.0)(rng);
      const auto x = xi_averages(s, a);
      const auto q = oracle::quadrature_averages(s, a);
      CHECK(std::fabs(x.c - q.c) < 1e-8);
      CHECK(std::fabs(x.c2 - q.c2) < 1e-8);
      CHECK(std::fabs(x.alpha - q.alpha) < 1e-8);
      CHECK(std::fabs(x.c_alpha - q.c_alpha) < 1e-8);
      CHECK(std::fabs(x.c_sin - q.c_sin) < 1e-8);
      CHECK(std::fabs(x.c_cos - q.c_cos) < 1e-8);
      CHECK(std::fabs(x.c_cossin - q.c_cossin) < 1e-8);
      CHECK(std::fabs(x.cossin - q.cossin) < 1e-8);
    }
  }

  TEST_CASE("averaged rhs matches the period-averaged error system") {
    std::mt19937_64 rng(22);
    oracle::Sampler sampler(23);
    for (int k = 0; k < 30; ++k) {
      const auto d = sampler.params(0.5, 2.6);
      const auto s = random_state(rng);
      const auto f = averaged_rhs(s, d.p, d.q_r);
      const auto g = oracle::averaged_error_rhs(s, d.p, d.q_r);
      for (int i = 0; i < 5; ++i) {
        CAPTURE(i);
        CHECK(std::fabs(f[i] - g[i]) <= 1e-6 * std::max(1.0, std::fabs(g[i])));
      }
    }
  }

  TEST_CASE("rhs scales as 1/omega") {
    ControllerParams p{};
    const AveragedState s{0.7, 0.2, -0.1, 1.0, 0.3};
    const auto f1 = averaged_rhs(s, p, 1.0);
    p.omega *= 2;
    const auto f2 = averaged_rhs(s, p, 1.0);
    for (int i = 0; i < 5; ++i) CHECK(f2[i] == doctest::Approx(0.5 * f1[i]).epsilon(1e-14));
  }

  TEST_CASE("singular states") {
    const ControllerParams p{};
    CHECK_THROWS_AS(averaged_rhs({0.0, 0.0, 0.0, 0.0, 0.0}, p, 1.0), SingularState);
    CHECK_THROWS_AS(averaged_rhs({1.0, pi / 2 - 1e-12, 0.0, 0.0, 0.0}, p, 1.0), SingularState);
    CHECK_NOTHROW(averaged_rhs({1.0, 1.5, 0.0, 0.0, 0.0}, p, 1.0));
  }

  TEST_CASE("gamma1 sign follows the interval") {
    ControllerParams p{};
    for (int k = 0; k <= 40; ++k) {
      p.a = 1.25 + 0.4 * k / 40;
      CAPTURE(p.a);
      CHECK(constants(p, 1.0).gamma1 < 0.0);
      p.a = 1.75 + 0.75 * k / 40;
      CHECK(constants(p, 1.0).gamma1 > 0.0);
    }
  }

  TEST_CASE("phi4 is positive") {
    ControllerParams p{};
    for (double a = 0.1; a <= 3.0; a += 0.01) {
      p.a = a;
      try {
        CHECK(constants(p, 1.0).phi4 > 0.0);
      } catch (const DegenerateParameters&) {
      }
    }
  }

  TEST_CASE("constants against an independent evaluation") {
    ControllerParams p{};
    const double a = p.a, J0 = std::cyl_bessel_j(0.0, sqrt2 * a), J1 = std::cyl_bessel_j(1.0, sqrt2 * a);
    const double phi4 = std::cyl_bessel_j(0.0, 2 * sqrt2 * a) + 2 * std::cyl_bessel_j(0.0, 2 * a) + 1;
    const double rho1 = 2 * J0 * J0 - phi4 / 2;
    const double rho2 = sqrt2 * p.b * (1 - std::cyl_bessel_j(0.0, 2 * sqrt2 * a)) / (4 * p.c_theta * J1);
    const auto c = constants(p, 1.0);
    CHECK(c.rho1 == doctest::Approx(rho1).epsilon(1e-12));
    CHECK(c.rho2 == doctest::Approx(rho2).epsilon(1e-12));
    CHECK(c.gamma1 == doctest::Approx(p.V_c * J0 / (p.b * p.R * rho1)).epsilon(1e-12));
    CHECK(c.gamma1 > 0.0);
    CHECK(c.e1 == doctest::Approx(-c.gamma1 * c.gamma1 + 2 * p.R * c.gamma1 * J0).epsilon(1e-12));
    p.a = 1.5;
    CHECK(constants(p, 1.0).gamma1 < 0.0);
  }

  TEST_CASE("degenerate divisors are named") {
    ControllerParams p{};
    p.a = 3.8317059702075123 / sqrt2;  // first zero of J1
    try {
      (void)constants(p, 1.0);
      FAIL("expected DegenerateParameters");
    } catch (const DegenerateParameters& e) {
      CHECK(e.factor() == "J1(sqrt(2) a)");
    }
    CHECK_THROWS_AS(constants(p, 0.0), InvalidParameter);
  }

  TEST_CASE("equilibrium structure and residuals") {
    oracle::Sampler sampler(31);
    int checked = 0;
    for (int k = 0; k < 40; ++k) {
      const auto d = sampler.params(1.25, 2.5);
      const auto eqs = equilibria(d.p, d.q_r);
      CHECK(eqs[0].state.e_hat == eqs[1].state.e_hat);
      CHECK(eqs[0].exists != eqs[1].exists);
      CHECK(eqs[2].exists == eqs[3].exists);
      if (eqs[2].exists) CHECK(eqs[2].state.theta_tilde == -eqs[3].state.theta_tilde);
      for (const auto& e : eqs) {
        if (!e.exists) continue;
        CHECK(e.state.r_tilde > 0.0);
        CHECK(residual(e.state, d.p, d.q_r) < 1e-9);
        ++checked;
      }
    }
    CHECK(checked >= 40);
  }

  TEST_CASE("averaged step stays at an equilibrium") {
    const ControllerParams p{};
    const auto eq1 = equilibria(p, 1.0)[0];
    REQUIRE(eq1.exists);
    AveragedState s = eq1.state;
    for (int k = 0; k < 2000; ++k) s = averaged_step(s, 0.5, p, 1.0);
    for (int i = 0; i < 5; ++i) CHECK(std::fabs(s.to_array()[i] - eq1.state.to_array()[i]) < 1e-6);
  }
}

TEST_SUITE("polynomial") {
  TEST_CASE("quadratic roots") {
    auto r = quadratic_roots(-3.0, 2.0);
    CHECK(std::min(r[0].real(), r[1].real()) == doctest::Approx(1.0));
    CHECK(std::max(r[0].real(), r[1].real()) == doctest::Approx(2.0));
    r = quadratic_roots(0.0, 1.0);
    CHECK(std::fabs(std::abs(r[0].imag()) - 1.0) < 1e-15);
    r = quadratic_roots(-1e8, 1.0);
    CHECK(std::min(std::abs(r[0]), std::abs(r[1])) == doctest::Approx(1e-8).epsilon(1e-12));
  }

  TEST_CASE("cubic roots satisfy the polynomial") {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> u(-10.0, 10.0);
    for (int k = 0; k < 500; ++k) {
      const std::array<double, 3> c{u(rng), u(rng), u(rng)};
      for (const auto& s : cubic_roots(c[0], c[1], c[2])) {
        const double scale = 1 + std::pow(std::abs(s), 3) + std::fabs(c[0]) * std::norm(s) +
                             std::fabs(c[1]) * std::abs(s) + std::fabs(c[2]);
        CHECK(std::abs(eval_monic(c, s)) / scale < 1e-13);
      }
    }
    const auto r = cubic_roots(-6.0, 11.0, -6.0);
    double sum = 0.0;
    for (const auto& s : r) sum += s.real();
    CHECK(sum == doctest::Approx(6.0));
    const auto triple = cubic_roots(-3.0, 3.0, -1.0);
    for (const auto& s : triple) CHECK(std::abs(s - 1.0) < 1e-4);
  }
}
