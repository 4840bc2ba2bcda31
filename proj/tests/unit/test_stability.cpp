#include <algorithm>
#include <cmath>
#include <vector>
#include <numbers>

#include "doctest.h"

#include "../oracles.hpp"
#include "esseek/bessel.hpp"
#include "esseek/errors.hpp"
#include "esseek/stability.hpp"

using namespace esseek;
using std::numbers::sqrt2;

namespace {

double vc_bar_oracle(const ControllerParams& p, double q_r) {
  const double a = p.a;
  const double J0 = std::cyl_bessel_j(0.0, sqrt2 * a), J1 = std::cyl_bessel_j(1.0, sqrt2 * a);
  const double j2a = std::cyl_bessel_j(0.0, 2 * a), j22a = std::cyl_bessel_j(0.0, 2 * sqrt2 * a);
  const double phi1 = 2 * j2a - 2, phi2 = j22a - 1, phi4 = j22a + 2 * j2a + 1;
  const double rho1 = 2 * J0 * J0 - phi4 / 2;
  return sqrt2 * p.b * p.b * q_r * p.R / (4 * J0 * J1) * std::min(phi1 * rho1 / p.c_alpha, phi2 * rho1 / p.c_theta);
}

// s^3 + c2 s^2 + c1 s + c0 of a 3x3 matrix by direct expansion.
std::array<double, 3> charpoly3(const std::array<std::array<double, 3>, 3>& m) {
  const double tr = m[0][0] + m[1][1] + m[2][2];
  const double minors = m[0][0] * m[1][1] - m[0][1] * m[1][0] + m[0][0] * m[2][2] - m[0][2] * m[2][0] +
                        m[1][1] * m[2][2] - m[1][2] * m[2][1];
  const double det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
                     m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
                     m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
  return {-tr, minors, -det};
}

// Sum over principal minors of the given order of the permanent of |m|: bounds the
// magnitude of the terms summed into the matching characteristic coefficient.
double term_scale(const Matrix5& m, int order) {
  double total = 0.0;
  for (int mask = 0; mask < 32; ++mask) {
    if (__builtin_popcount(mask) != order) continue;
    std::vector<int> idx;
    for (int i = 0; i < 5; ++i)
      if (mask & (1 << i)) idx.push_back(i);
    std::vector<int> perm = idx;
    do {
      double prod = 1.0;
      for (std::size_t k = 0; k < idx.size(); ++k) prod *= std::fabs(m[idx[k]][perm[k]]);
      total += prod;
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  return total;
}

}  // namespace

TEST_SUITE("stability") {
  TEST_CASE("analytic eq1 entries") {
    const ControllerParams p{};
    const auto m = jacobian_eq1_analytic(p, 1.0);
    CHECK(m.m15 == doctest::Approx(5.0 * std::cyl_bessel_j(0.0, 2 * sqrt2)).epsilon(1e-12));
    CHECK(m.m44 < 0.0);
  }

  TEST_CASE("eq2 differs from eq1 in exactly four entries") {
    const ControllerParams p{};
    const auto m = jacobian_eq1_analytic(p, 1.0);
    const auto J1 = assemble_eq1(m, p.h, p.omega, false), J2 = assemble_eq1(m, p.h, p.omega, true);
    int flipped = 0;
    for (int i = 0; i < 5; ++i)
      for (int j = 0; j < 5; ++j) {
        if (J1[i][j] == J2[i][j]) continue;
        CHECK(J1[i][j] == -J2[i][j]);
        ++flipped;
      }
    CHECK(flipped == 4);
    CHECK(J1[0][4] == -J2[0][4]);
    CHECK(J1[1][2] == -J2[1][2]);
    CHECK(J1[2][1] == -J2[2][1]);
    CHECK(J1[4][0] == -J2[4][0]);
  }

  TEST_CASE("finite differences agree with the analytic eq1 Jacobian") {
    oracle::Sampler s(51);
    for (int k = 0; k < 30; ++k) {
      const auto d = s.params(1.75, 2.5);
      const auto eq1 = equilibria(d.p, d.q_r)[0];
      REQUIRE(eq1.exists);
      const auto A = assemble_eq1(jacobian_eq1_analytic(d.p, d.q_r), d.p.h, d.p.omega);
      const auto N = jacobian_numeric(eq1.state, d.p, d.q_r);
      double scale = 0.0;
      for (const auto& row : A)
        for (double v : row) scale = std::max(scale, std::fabs(v));
      for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j) CHECK(std::fabs(A[i][j] - N[i][j]) <= 1e-6 * scale);
    }
  }

  TEST_CASE("factored characteristic polynomial matches the matrix") {
    oracle::Sampler s(52);
    for (int k = 0; k < 30; ++k) {
      const auto d = s.params(1.25, 2.5);
      const auto m = jacobian_eq1_analytic(d.p, d.q_r);
      const auto ch = characteristic_eq1(m, d.p.h);
      const auto M = scaled(assemble_eq1(m, d.p.h, d.p.omega), d.p.omega);
      const auto fl = oracle::faddeev_leverrier(M);
      const auto ex = ch.expanded();
      for (int i = 0; i < 5; ++i) CHECK(std::fabs(ex[i] - fl[i]) <= 1e-12 * term_scale(M, i + 1));
      const auto roots = ch.roots();
      const auto be = block_eigenvalues(M);
      for (const auto& r : roots) {
        double best = INFINITY;
        for (const auto& b : be) best = std::min(best, std::abs(r - b));
        CHECK(best <= 1e-9 * std::max(1.0, std::abs(r)));
      }
    }
  }

  TEST_CASE("corollary gate examples") {
    ControllerParams p{};
    auto g = corollary_gate(p, 1.0);
    CHECK(g.corollary1);
    CHECK_FALSE(g.corollary2);
    CHECK_FALSE(g.vc_bar.has_value());
    CHECK(hurwitz_eq1(p, 1.0).verdict);

    p.a = 1.5;
    g = corollary_gate(p, 1.0);
    REQUIRE(g.vc_bar.has_value());
    CHECK(*g.vc_bar == doctest::Approx(vc_bar_oracle(p, 1.0)).epsilon(1e-12));
    CHECK(g.corollary2 == (p.V_c < vc_bar_oracle(p, 1.0)));
    p.V_c = 0.5 * *g.vc_bar;
    CHECK(corollary_gate(p, 1.0).corollary2);

    p.a = 1.0;
    g = corollary_gate(p, 1.0);
    CHECK_FALSE(g.corollary1);
    CHECK_FALSE(g.corollary2);
  }

  TEST_CASE("sign conditions over both intervals") {
    ControllerParams p{};
    for (int k = 0; k < 50; ++k) {
      const bool first = k < 25;
      p.a = first ? 1.25 + 0.4 * k / 24 : 1.75 + 0.75 * (k - 25) / 24;
      CAPTURE(p.a);
      const auto c = constants(p, 1.0);
      CHECK(c.phi1 < 0.0);
      CHECK(c.phi2 < 0.0);
      CHECK(c.rho1 < 0.0);
      CHECK(c.j1_s2a > 0.0);
      CHECK((first ? c.j0_s2a > 0.0 : c.j0_s2a < 0.0));
      CHECK(hurwitz_eq1(p, 1.0).explicit_[2]);
    }
  }

  TEST_CASE("raw and explicit conditions agree") {
    oracle::Sampler s(53);
    for (int k = 0; k < 200; ++k) {
      const auto d = s.params(1.25, 2.5);
      const auto h = hurwitz_eq1(d.p, d.q_r);
      CHECK(h.raw[0] == h.explicit_[0]);
      CHECK(h.raw[2] == h.explicit_[1]);
      CHECK(h.raw[3] == h.explicit_[2]);
      CHECK(h.raw[1] == h.explicit_[3]);
      CHECK(h.raw[4] == h.explicit_[4]);
    }
  }

  TEST_CASE("eq1 verdict matches the eigenvalue oracle") {
    oracle::Sampler s(54);
    int compared = 0;
    for (int k = 0; k < 200; ++k) {
      const auto d = s.params(1.25, 2.5);
      const auto M = scaled(assemble_eq1(jacobian_eq1_analytic(d.p, d.q_r), d.p.h, d.p.omega), d.p.omega);
      if (oracle::min_abs_real(M) <= kSpectrumMargin) continue;
      CHECK(hurwitz_eq1(d.p, d.q_r).verdict == (oracle::max_real(M) < 0.0));
      ++compared;
    }
    CHECK(compared > 150);
  }

  TEST_CASE("eq3 conditions and k coefficients") {
    ControllerParams p{};
    p.a = 1.5;
    p.V_c = 0.1;
    const auto h = hurwitz_eq3(p, 1.0);
    CHECK(h.verdict);
    std::array<std::array<double, 3>, 3> block{};
    const int idx[3] = {0, 3, 4};
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) block[i][j] = h.l[idx[i]][idx[j]];
    block[2][2] = -p.h;
    const auto c = charpoly3(block);
    CHECK(h.k1 == doctest::Approx(c[0]).epsilon(1e-8));
    CHECK(h.k2 == doctest::Approx(c[1]).epsilon(1e-8));
    CHECK(h.k3 == doctest::Approx(c[2]).epsilon(1e-8));

    p.a = 2.0;
    p.V_c = 0.001;
    CHECK_THROWS_AS(hurwitz_eq3(p, 1.0), EquilibriumMissing);
  }

  TEST_CASE("eq3 and eq4 Jacobians are mirror images") {
    ControllerParams p{};
    p.a = 1.5;
    p.V_c = 0.1;
    const auto eqs = equilibria(p, 1.0);
    REQUIRE(eqs[2].exists);
    const auto J3 = jacobian_numeric(eqs[2].state, p, 1.0), J4 = jacobian_numeric(eqs[3].state, p, 1.0);
    const auto flip = [](int i, int j) {
      return (i == 0 && j == 3) || (i == 3 && j == 0) || (i == 3 && j == 4) || (i == 4 && j == 3);
    };
    double scale = 0.0;
    for (const auto& row : J3)
      for (double v : row) scale = std::max(scale, std::fabs(v));
    for (int i = 0; i < 5; ++i)
      for (int j = 0; j < 5; ++j) CHECK(std::fabs(J4[i][j] - (flip(i, j) ? -1 : 1) * J3[i][j]) <= 1e-7 * scale);
    CHECK(off_block_magnitude(J3) <= 1e-7 * scale);
  }

  TEST_CASE("spectrum classification") {
    std::array<Complex, 5> ev{Complex{-1, 0}, {-2, 1}, {-2, -1}, {-0.5, 0}, {-3, 0}};
    double margin = 0.0;
    CHECK(classify(ev, &margin) == SpectrumVerdict::stable);
    CHECK(margin == doctest::Approx(0.5));
    ev[3] = {1e-9, 0};
    CHECK(classify(ev) == SpectrumVerdict::marginal);
    ev[3] = {1e-3, 0};
    CHECK(classify(ev) == SpectrumVerdict::unstable);
    CHECK(to_string(SpectrumVerdict::marginal) == "marginal");
  }

  TEST_CASE("reports for every existing equilibrium") {
    ControllerParams p{};
    p.a = 1.5;
    p.V_c = 0.1;
    for (const auto& e : equilibria(p, 1.0)) {
      if (!e.exists) continue;
      const auto r = jacobian_report(e, p, 1.0);
      CHECK(r.kind == e.kind);
      CHECK(r.analytic.has_value() == (e.kind == EquilibriumKind::eq1 || e.kind == EquilibriumKind::eq2));
      if (r.spectrum != SpectrumVerdict::marginal) CHECK(r.hurwitz == (r.spectrum == SpectrumVerdict::stable));
    }
  }
}
