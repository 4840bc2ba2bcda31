#include "esseek/averaging.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "esseek/bessel.hpp"
#include "esseek/errors.hpp"

namespace esseek {

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;
const double kSqrt5 = std::sqrt(5.0);
constexpr double kDegenerate = 1e-14;

void require_nonzero(double v, const char* factor) {
  if (!(std::fabs(v) > kDegenerate)) throw DegenerateParameters(factor);
}

void check_q_r(double q_r) {
  if (!(std::isfinite(q_r) && q_r > 0.0)) {
    throw InvalidParameter("field.q_r must be finite and strictly positive (got " + std::to_string(q_r) + ")");
  }
}

}  // namespace

XiAverages xi_averages(const AveragedState& s, double a) {
  using bessel::j0;
  using bessel::j1;
  const double j0a = j0(a), j0s2 = j0(kSqrt2 * a), j02a = j0(2.0 * a), j02s2 = j0(2.0 * kSqrt2 * a),
               j0s5 = j0(kSqrt5 * a);
  const double j1a = j1(a), j1s2 = j1(kSqrt2 * a);

  const double cA = std::cos(s.alpha_star), sA = std::sin(s.alpha_star);
  const double cH = std::cos(s.alpha_hat), sH = std::sin(s.alpha_hat);
  const double cT = std::cos(s.theta_tilde), sT = std::sin(s.theta_tilde);
  const double c2H = std::cos(2.0 * s.alpha_hat), s2H = std::sin(2.0 * s.alpha_hat);
  const double c2T = std::cos(2.0 * s.theta_tilde), s2T = std::sin(2.0 * s.theta_tilde);
  const double c2A = std::cos(2.0 * s.alpha_star), s2A = std::sin(2.0 * s.alpha_star);

  XiAverages x;
  x.c = j0s2 * cA * cH * cT + j0a * sA * sH;
  x.c2 = cA * cA / 4.0 * (j02s2 * c2H * c2T + j02a * (c2H + c2T) + 1.0) + sA * sA / 2.0 * (1.0 - j02a * c2H) +
         j0s5 / 2.0 * s2A * s2H * cT;
  x.alpha = j0a * cA * sH - j0s2 * sA * cH * cT;
  x.c_alpha = j0s5 / 2.0 * c2A * s2H * cT -
              s2A / 8.0 * (j02s2 * c2H * c2T + 3.0 * j02a * c2H + j02a * c2T - 1.0);
  x.c_sin = -j1s2 / kSqrt2 * cA * sH * cT + j1a * sA * cH;
  x.c_cos = -j1s2 / kSqrt2 * cA * cH * sT;
  x.c_cossin = j02s2 / 4.0 * cA * c2H * s2T + j02a / 4.0 * cA * s2T + j0s5 / 2.0 * sA * s2H * sT;
  x.cossin = j0s2 * cH * sT;
  return x;
}

std::array<double, 5> averaged_rhs(const AveragedState& s, const ControllerParams& p, double q_r) {
  if (!(s.r_tilde > 0.0)) {
    throw SingularState("averaged system is singular at r_tilde = " + std::to_string(s.r_tilde) +
                        " (requires r_tilde > 0)");
  }
  const double cA = std::cos(s.alpha_star);
  if (std::fabs(cA) < 1e-9) {
    throw SingularState("averaged system is singular at cos(alpha_star) = 0 (alpha_star = " +
                        std::to_string(s.alpha_star) + ")");
  }
  const XiAverages x = xi_averages(s, p.a);
  const double r = s.r_tilde;
  const double w = p.omega;
  const double bqR = p.b * q_r * p.R;
  const double K = p.b * q_r * r * r + p.b * s.e_hat - p.V_c;
  return {
      (K * x.c - 2.0 * bqR * r * x.c2) / w,
      (K / r * x.alpha - 2.0 * bqR * x.c_alpha) / w,
      2.0 * p.c_alpha * q_r * p.R * r * x.c_sin / w,
      (2.0 * p.c_theta * q_r * p.R * r * x.c_cos + 2.0 * bqR / cA * x.c_cossin - K / (r * cA) * x.cossin) / w,
      (-p.h * q_r * r * r - p.h * s.e_hat + 2.0 * p.h * q_r * p.R * r * x.c) / w,
  };
}

AnalysisConstants constants(const ControllerParams& p, double q_r) {
  p.validate();
  check_q_r(q_r);
  using bessel::j0;
  using bessel::j1;
  const double a = p.a;
  AnalysisConstants c;
  c.j0_s2a = j0(kSqrt2 * a);
  c.j1_s2a = j1(kSqrt2 * a);
  const double j = c.j0_s2a;
  const double j02a = j0(2.0 * a), j02s2 = j0(2.0 * kSqrt2 * a);

  c.phi4 = j02s2 + 2.0 * j02a + 1.0;
  c.phi1 = 2.0 * j02a - 2.0;
  c.phi2 = j02s2 - 1.0;
  c.rho1 = 2.0 * j * j - 0.5 * c.phi4;
  require_nonzero(c.rho1, "rho1");
  require_nonzero(c.j1_s2a, "J1(sqrt(2) a)");
  c.rho2 = kSqrt2 * p.b * (1.0 - j02s2) / (4.0 * p.c_theta * c.j1_s2a);
  require_nonzero(c.rho2, "rho2");
  require_nonzero(c.phi2, "J0(2 sqrt(2) a) - 1");

  const double bqR = p.b * q_r * p.R;
  c.gamma1 = p.V_c * j / (bqR * c.rho1);
  c.gamma2 = 2.0 * j * j + p.V_c * j / (bqR * c.rho2);
  c.gamma3 = (j02s2 + j02a - c.gamma2) / c.phi2;
  if (2.0 * c.gamma3 >= 1.0) c.mu0 = std::acos(-std::sqrt(1.0 / (2.0 * c.gamma3)));
  c.e1 = -q_r * c.gamma1 * c.gamma1 + 2.0 * q_r * p.R * c.gamma1 * j;
  c.e2 = -2.0 * q_r * c.gamma3 * c.rho2 * c.rho2 - 2.0 * q_r * p.R * c.rho2 * j;
  // phi3 divides by J0(sqrt2 a); it is only meaningful when that is nonzero.
  c.phi3 = std::fabs(j) > kDegenerate ? j0(a) * c.phi4 / j - 4.0 * j0(kSqrt5 * a)
                                      : std::numeric_limits<double>::quiet_NaN();
  return c;
}

std::string_view to_string(EquilibriumKind kind) {
  switch (kind) {
    case EquilibriumKind::eq1: return "eq1";
    case EquilibriumKind::eq2: return "eq2";
    case EquilibriumKind::eq3: return "eq3";
    case EquilibriumKind::eq4: return "eq4";
  }
  return "unknown";
}

std::array<Equilibrium, 4> equilibria(const AnalysisConstants& c) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::array<Equilibrium, 4> out;
  out[0] = {EquilibriumKind::eq1, {c.gamma1, 0.0, 0.0, 0.0, c.e1}, c.gamma1 > 0.0};
  out[1] = {EquilibriumKind::eq2, {-c.gamma1, 0.0, 0.0, std::numbers::pi, c.e1}, -c.gamma1 > 0.0};
  if (c.mu0 && c.gamma3 > 0.0) {
    const double r3 = c.rho2 * std::sqrt(2.0 * c.gamma3);
    const bool ok = r3 > 0.0;
    out[2] = {EquilibriumKind::eq3, {r3, 0.0, 0.0, *c.mu0, c.e2}, ok};
    out[3] = {EquilibriumKind::eq4, {r3, 0.0, 0.0, -*c.mu0, c.e2}, ok};
  } else {
    out[2] = {EquilibriumKind::eq3, {nan, 0.0, 0.0, nan, c.e2}, false};
    out[3] = {EquilibriumKind::eq4, {nan, 0.0, 0.0, nan, c.e2}, false};
  }
  return out;
}

std::array<Equilibrium, 4> equilibria(const ControllerParams& p, double q_r) { return equilibria(constants(p, q_r)); }

double residual(const AveragedState& s, const ControllerParams& p, double q_r) {
  const auto f = averaged_rhs(s, p, q_r);
  double m = 0.0;
  for (double v : f) m = std::max(m, std::fabs(v));
  return m;
}

AveragedState averaged_step(const AveragedState& s, double dtau, const ControllerParams& p, double q_r) {
  using A = std::array<double, 5>;
  const auto add = [](const A& y, double h, const A& k) {
    A o;
    for (std::size_t i = 0; i < 5; ++i) o[i] = y[i] + h * k[i];
    return o;
  };
  const auto f = [&](const A& y) { return averaged_rhs(AveragedState::from_array(y), p, q_r); };
  const A y = s.to_array();
  const A k1 = f(y);
  const A k2 = f(add(y, 0.5 * dtau, k1));
  const A k3 = f(add(y, 0.5 * dtau, k2));
  const A k4 = f(add(y, dtau, k3));
  A n;
  for (std::size_t i = 0; i < 5; ++i) n[i] = y[i] + dtau / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  return AveragedState::from_array(n);
}

}  // namespace esseek
