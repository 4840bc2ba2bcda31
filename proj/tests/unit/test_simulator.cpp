#include <cmath>
#include <cstring>
#include <numbers>
#include <random>

#include "doctest.h"

#include "esseek/errors.hpp"
#include "esseek/simulator.hpp"

using namespace esseek;
using std::numbers::pi;

namespace {

SimConfig paper_config(double t_end) {
  SimConfig c;
  c.params = ControllerParams{};
  c.params.a = 2.0;
  c.initial = {{1, 1, 1}, -pi / 2, -pi / 2};
  c.dt = SimConfig::default_dt(c.params.omega);
  c.t_end = t_end;
  return c;
}

}  // namespace

TEST_SUITE("simulator") {
  TEST_CASE("t_end = 0 gives the initial row only") {
    const auto traj = run(paper_config(0.0));
    REQUIRE(traj.size() == 1);
    CHECK(traj[0].t == 0.0);
    CHECK(traj[0].r_c == Vec3{1, 1, 1});
    CHECK(traj[0].xi == 0.0);
    CHECK(traj[0].v == 0.001);
  }

  TEST_CASE("row count follows the stride") {
    auto c = paper_config(2.0);
    c.record_stride = 3;
    const auto traj = run(c);
    CHECK(traj.size() == c.step_count() / 3 + 1);
    for (std::size_t i = 1; i < traj.size(); ++i) CHECK(traj[i].t > traj[i - 1].t);
  }

  TEST_CASE("runs are bit-identical") {
    const auto c = paper_config(3.0);
    const auto a = run(c), b = run(c);
    REQUIRE(a.size() == b.size());
    CHECK(std::memcmp(a.data(), b.data(), a.size() * sizeof(TrajectoryRow)) == 0);
  }

  TEST_CASE("config validation") {
    auto c = paper_config(1.0);
    CHECK_NOTHROW(c.validate());
    c.dt = 2 * pi / c.params.omega / 16;
    CHECK_THROWS_AS(c.validate(), InvalidParameter);
    c = paper_config(-1.0);
    CHECK_THROWS_AS(c.validate(), InvalidParameter);
    c = paper_config(1.0);
    c.record_stride = 0;
    CHECK_THROWS_AS(c.validate(), InvalidParameter);
    c = paper_config(1.0);
    c.params.h = -1.0;
    CHECK_THROWS_AS(c.validate(), InvalidParameter);
  }

  TEST_CASE("constant field with a converged filter moves at V_c along the heading") {
    auto c = paper_config(0.0);
    c.field = QuadraticSpherical{1.0, 1e-300, {}};
    ClosedLoopState s = initial_state(c);
    const Vec3 start = s.vehicle.r_c;
    double t = 0.0;
    double path = 0.0;
    for (int k = 0; k < 64; ++k) {
      const auto o = observe(s, t, c);
      CHECK(std::fabs(o.xi) < 1e-12);
      CHECK(o.v == doctest::Approx(c.params.V_c));
      const Vec3 before = s.vehicle.r_c;
      s = step(s, t, c, k);
      path += norm(s.vehicle.r_c - before);
      t += c.dt;
    }
    CHECK(path == doctest::Approx(c.params.V_c * 64 * c.dt).epsilon(1e-6));
    CHECK(norm(s.vehicle.r_c - start) <= path + 1e-15);
  }

  TEST_CASE("zero V_c and b freeze the position") {
    auto c = paper_config(0.0);
    c.params.V_c = 0.0;
    c.params.b = 0.0;
    ClosedLoopState s = initial_state(c);
    for (int k = 0; k < 200; ++k) s = step(s, k * c.dt, c, k);
    CHECK(s.vehicle.r_c == Vec3{1, 1, 1});
    CHECK(s.vehicle.alpha != -pi / 2);
  }

  TEST_CASE("divergence reports the step index") {
    auto c = paper_config(0.0);
    c.params.b = 1e300;
    c.initial.r_c = {1e100, 0, 0};
    ClosedLoopState s = initial_state(c);
    s.washout.eta = 0.0;
    try {
      s = step(s, 0.0, c, 17);
      FAIL("expected divergence");
    } catch (const SimulationDiverged& e) {
      CHECK(e.step_index() == 17);
    }
  }

  TEST_CASE("error coordinates") {
    ControllerParams p{};
    const QuadraticSpherical f{1.0, 1.0, {0.5, 0.5, 0.5}};
    SUBCASE("theta_hat at t = 0") {
      const auto ec = error_coords({{1.5, 0.5, 0.5}, 0.0, 0.7}, {0.0}, 0.0, p, f);
      CHECK(ec.theta_hat == doctest::Approx(0.7 - p.a));
      CHECK(ec.alpha_hat == doctest::Approx(0.0));
      CHECK(ec.r_tilde == doctest::Approx(1.0));
    }
    SUBCASE("source directly above") {
      const auto ec = error_coords({{0.5, 0.5, -1.5}, 0.0, 0.0}, {0.0}, 0.0, p, f);
      CHECK(ec.alpha_star == doctest::Approx(pi / 2));
    }
    SUBCASE("round trip") {
      std::mt19937_64 rng(13);
      std::uniform_real_distribution<double> u(-3.0, 3.0);
      for (int k = 0; k < 300; ++k) {
        const Vec3 r{u(rng), u(rng), u(rng)};
        const auto ec = error_coords({r, u(rng), u(rng)}, {u(rng)}, u(rng), p, f);
        REQUIRE(ec.angles_defined);
        const Vec3 dir{std::cos(ec.alpha_star) * std::cos(ec.theta_star),
                       std::cos(ec.alpha_star) * std::sin(ec.theta_star), std::sin(ec.alpha_star)};
        const Vec3 back = f.r_star - ec.r_tilde * dir;
        CHECK(norm(back - r) < 1e-10);
        CHECK(ec.theta_tilde > -pi);
        CHECK(ec.theta_tilde <= pi);
      }
    }
    SUBCASE("e_hat only for spherical fields") {
      const auto ec = error_coords({{1, 1, 1}, 0, 0}, {0.25}, 0.0, p, f);
      REQUIRE(ec.e_hat.has_value());
      CHECK(*ec.e_hat == doctest::Approx(0.25 - 1.0 + p.R * p.R));
      CHECK_FALSE(error_coords({{1, 1, 1}, 0, 0}, {0.25}, 0.0, p, Rosenbrock{}).e_hat.has_value());
    }
    SUBCASE("degenerate at the source") {
      const auto ec = error_coords({f.r_star, 0, 0}, {0.0}, 0.0, p, f);
      CHECK_FALSE(ec.angles_defined);
      CHECK(ec.r_tilde == 0.0);
    }
  }

  TEST_CASE("wrap_angle maps into (-pi, pi]") {
    CHECK(wrap_angle(pi) == doctest::Approx(pi));
    CHECK(wrap_angle(-pi) == doctest::Approx(pi));
    CHECK(wrap_angle(3 * pi / 2) == doctest::Approx(-pi / 2));
    CHECK(wrap_angle(0.25 + 10 * pi) == doctest::Approx(0.25));
  }

  TEST_CASE("per-period averages") {
    const double omega = 40.0, T = 2 * pi / omega, dt = T / 64;
    Trajectory traj;
    for (int k = 0; k <= 64 * 5 + 10; ++k) {
      TrajectoryRow r;
      r.t = k * dt;
      r.J = 0.75;
      r.xi = std::sin(omega * r.t);
      traj.push_back(r);
    }
    const auto c = per_period_average(traj, [](const TrajectoryRow& r) { return r.J; }, 0.0, omega);
    CHECK(c.size() == 5);
    for (double v : c) CHECK(v == doctest::Approx(0.75));
    for (double v : per_period_average(traj, [](const TrajectoryRow& r) { return r.xi; }, 0.0, omega)) {
      CHECK(std::fabs(v) < dt * dt);
    }
    CHECK(per_period_average(traj, [](const TrajectoryRow& r) { return r.J; }, 5 * T, omega).empty());
    const auto ang = per_period_circular_mean(traj, [](const TrajectoryRow&) { return pi - 0.01; }, 0.0, omega);
    for (double v : ang) CHECK(v == doctest::Approx(pi - 0.01));
  }

  TEST_CASE("converged run damps the washout output") {
    auto c = paper_config(120.0);
    const auto traj = run(c);
    const auto xi = per_period_average(traj, [](const TrajectoryRow& r) { return std::fabs(r.xi); }, 0.0, c.params.omega);
    REQUIRE(xi.size() > 20);
    double early = 0.0, late = 0.0;
    for (int k = 0; k < 10; ++k) {
      early += xi[k];
      late += xi[xi.size() - 1 - k];
    }
    CHECK(late < early);
    const auto s = summarize(traj, c);
    CHECK(s.final_distance < norm(Vec3{1, 1, 1}));
    CHECK(s.periods == 10);
  }
}
