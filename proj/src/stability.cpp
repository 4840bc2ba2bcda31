#include "esseek/stability.hpp"

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

constexpr std::array<int, 2> kBlockA{1, 2};
constexpr std::array<int, 3> kBlockR{0, 3, 4};

}  // namespace

Eq1Entries jacobian_eq1_analytic(const ControllerParams& p, double q_r) {
  const AnalysisConstants c = constants(p, q_r);
  const double j = c.j0_s2a;
  if (!(std::fabs(j) > 1e-14)) throw DegenerateParameters("J0(sqrt(2) a)");
  const double a = p.a;
  const double bqR = p.b * q_r * p.R;
  const double k = p.V_c * j / (p.b * c.rho1);
  Eq1Entries m;
  m.m11 = 2.0 * p.V_c * j * j / (p.R * c.rho1) - 0.5 * bqR * c.phi4;
  m.m15 = p.b * j;
  m.m22 = 0.5 * bqR * c.phi1;
  m.m23 = 0.5 * bqR * c.phi3;
  m.m32 = 2.0 * p.c_alpha * k * bessel::j1(a);
  m.m33 = -kSqrt2 * p.c_alpha * k * c.j1_s2a;
  m.m44 = -kSqrt2 * p.c_theta * k * c.j1_s2a + 0.5 * bqR * c.phi2;
  m.m51 = -2.0 * p.h * k / p.R + 2.0 * p.h * q_r * p.R * j;
  return m;
}

Matrix5 assemble_eq1(const Eq1Entries& m, double h, double omega, bool eq2_signs) {
  const double s = eq2_signs ? -1.0 : 1.0;
  Matrix5 M{};
  M[0][0] = m.m11;
  M[0][4] = s * m.m15;
  M[1][1] = m.m22;
  M[1][2] = s * m.m23;
  M[2][1] = s * m.m32;
  M[2][2] = m.m33;
  M[3][3] = m.m44;
  M[4][0] = s * m.m51;
  M[4][4] = -h;
  return scaled(M, 1.0 / omega);
}

Matrix5 scaled(const Matrix5& m, double factor) {
  Matrix5 out = m;
  for (auto& row : out)
    for (double& v : row) v *= factor;
  return out;
}

Matrix5 jacobian_numeric(const AveragedState& at, const ControllerParams& p, double q_r) {
  const auto x0 = at.to_array();
  Matrix5 J{};
  for (int i = 0; i < 5; ++i) {
    const double step = std::max(1e-6, 1e-6 * std::fabs(x0[i]));
    auto xp = x0, xm = x0;
    xp[i] += step;
    xm[i] -= step;
    const auto fp = averaged_rhs(AveragedState::from_array(xp), p, q_r);
    const auto fm = averaged_rhs(AveragedState::from_array(xm), p, q_r);
    for (int r = 0; r < 5; ++r) J[r][i] = (fp[r] - fm[r]) / (2.0 * step);
  }
  return J;
}

Complex CharacteristicEq1::evaluate(Complex s) const {
  return (s * s + quad1[0] * s + quad1[1]) * (s - m44) * (s * s + quad2[0] * s + quad2[1]);
}

std::array<double, 5> CharacteristicEq1::expanded() const {
  // (s^2 + a1 s + a0)(s^2 + b1 s + b0) = s^4 + c3 s^3 + c2 s^2 + c1 s + c0
  const double a1 = quad1[0], a0 = quad1[1], b1 = quad2[0], b0 = quad2[1];
  const double c3 = a1 + b1, c2 = a0 + b0 + a1 * b1, c1 = a1 * b0 + a0 * b1, c0 = a0 * b0;
  // times (s - m44)
  return {c3 - m44, c2 - m44 * c3, c1 - m44 * c2, c0 - m44 * c1, -m44 * c0};
}

std::array<Complex, 5> CharacteristicEq1::roots() const {
  const auto r1 = quadratic_roots(quad1[0], quad1[1]);
  const auto r2 = quadratic_roots(quad2[0], quad2[1]);
  return {r1[0], r1[1], Complex{m44}, r2[0], r2[1]};
}

CharacteristicEq1 characteristic_eq1(const Eq1Entries& m, double h) {
  CharacteristicEq1 c;
  c.quad1 = {-(m.m22 + m.m33), m.m22 * m.m33 - m.m23 * m.m32};
  c.m44 = m.m44;
  c.quad2 = {h - m.m11, -m.m11 * h - m.m15 * m.m51};
  return c;
}

Eq1Hurwitz hurwitz_eq1(const ControllerParams& p, double q_r) {
  const Eq1Entries m = jacobian_eq1_analytic(p, q_r);
  const AnalysisConstants c = constants(p, q_r);
  const double h = p.h;
  Eq1Hurwitz out;
  out.raw = {m.m22 + m.m33 < 0.0, m.m22 * m.m33 - m.m23 * m.m32 > 0.0, m.m44 < 0.0, h - m.m11 > 0.0,
             -m.m11 * h - m.m15 * m.m51 > 0.0};

  const double j = c.j0_s2a, J1 = c.j1_s2a, rho1 = c.rho1;
  const double qR = q_r * p.R;
  const double b2qR = p.b * p.b * qR;
  out.explicit_ = {
      b2qR * c.phi1 < 2.0 * kSqrt2 * p.c_alpha * p.V_c * j * J1 / rho1,
      b2qR * c.phi2 < 2.0 * kSqrt2 * p.c_theta * p.V_c * j * J1 / rho1,
      2.0 * p.V_c * j * j / rho1 < h * p.R + 0.5 * p.b * qR * p.R * c.phi4,
      (j / rho1) * (kSqrt2 / 2.0 * c.phi1 * J1 + c.phi3 * bessel::j1(p.a)) < 0.0,
      4.0 * j * j - c.phi4 < 0.0,
  };
  out.verdict = std::all_of(out.raw.begin(), out.raw.end(), [](bool b) { return b; });
  return out;
}

std::array<double, 3> k_coefficients(const Matrix5& l, double h) {
  const double l11 = l[0][0], l14 = l[0][3], l15 = l[0][4];
  const double l41 = l[3][0], l44 = l[3][3], l45 = l[3][4];
  const double l51 = l[4][0], l54 = l[4][3];
  const double k1 = h - l11 - l44;
  const double k2 = l11 * l44 - l11 * h - l44 * h - l45 * l54 - l14 * l41 - l15 * l51;
  const double k3 = l11 * l44 * h - l14 * l41 * h + l11 * l45 * l54 + l15 * l44 * l51 - l14 * l45 * l51 -
                    l15 * l41 * l54;
  return {k1, k2, k3};
}

Eq3Hurwitz hurwitz_eq3(const ControllerParams& p, double q_r) {
  const auto eqs = equilibria(p, q_r);
  if (!eqs[2].exists) throw EquilibriumMissing("eq3 does not exist for these parameters (requires 2 gamma3 >= 1)");
  Eq3Hurwitz out;
  out.l = scaled(jacobian_numeric(eqs[2].state, p, q_r), p.omega);
  const auto k = k_coefficients(out.l, p.h);
  out.k1 = k[0];
  out.k2 = k[1];
  out.k3 = k[2];
  const double l22 = out.l[1][1], l23 = out.l[1][2], l32 = out.l[2][1], l33 = out.l[2][2];
  out.conditions = {l22 + l33 < 0.0, l22 * l33 - l23 * l32 > 0.0, out.k1 > 0.0,
                    out.k2 > 0.0,    out.k3 > 0.0,                  out.k1 * out.k2 - out.k3 > 0.0};
  out.verdict = std::all_of(out.conditions.begin(), out.conditions.end(), [](bool b) { return b; });
  return out;
}

CorollaryGate corollary_gate(const ControllerParams& p, double q_r) {
  CorollaryGate g;
  g.corollary1 = p.a >= 1.75 && p.a <= 2.5;
  if (p.a >= 1.25 && p.a <= 1.65) {
    const AnalysisConstants c = constants(p, q_r);
    const double pre = kSqrt2 * p.b * p.b * q_r * p.R / (4.0 * c.j0_s2a * c.j1_s2a);
    g.vc_bar = pre * std::min(c.phi1 * c.rho1 / p.c_alpha, c.phi2 * c.rho1 / p.c_theta);
    g.corollary2 = p.V_c < *g.vc_bar;
  }
  return g;
}

std::array<Complex, 5> block_eigenvalues(const Matrix5& m) {
  const double a11 = m[1][1], a12 = m[1][2], a21 = m[2][1], a22 = m[2][2];
  const auto ra = quadratic_roots(-(a11 + a22), a11 * a22 - a12 * a21);

  const auto& b = m;
  const int i0 = kBlockR[0], i1 = kBlockR[1], i2 = kBlockR[2];
  const double tr = b[i0][i0] + b[i1][i1] + b[i2][i2];
  const double minors = b[i0][i0] * b[i1][i1] - b[i0][i1] * b[i1][i0] + b[i0][i0] * b[i2][i2] -
                        b[i0][i2] * b[i2][i0] + b[i1][i1] * b[i2][i2] - b[i1][i2] * b[i2][i1];
  const double det = b[i0][i0] * (b[i1][i1] * b[i2][i2] - b[i1][i2] * b[i2][i1]) -
                     b[i0][i1] * (b[i1][i0] * b[i2][i2] - b[i1][i2] * b[i2][i0]) +
                     b[i0][i2] * (b[i1][i0] * b[i2][i1] - b[i1][i1] * b[i2][i0]);
  const auto rb = cubic_roots(-tr, minors, -det);
  return {ra[0], ra[1], rb[0], rb[1], rb[2]};
}

double off_block_magnitude(const Matrix5& m) {
  double worst = 0.0;
  for (int i : kBlockA)
    for (int j : kBlockR) worst = std::max({worst, std::fabs(m[i][j]), std::fabs(m[j][i])});
  return worst;
}

std::string_view to_string(SpectrumVerdict v) {
  switch (v) {
    case SpectrumVerdict::stable: return "stable";
    case SpectrumVerdict::unstable: return "unstable";
    case SpectrumVerdict::marginal: return "marginal";
  }
  return "unknown";
}

SpectrumVerdict classify(const std::array<Complex, 5>& eigenvalues, double* margin) {
  double min_abs = std::numeric_limits<double>::infinity();
  double max_re = -std::numeric_limits<double>::infinity();
  for (const auto& l : eigenvalues) {
    min_abs = std::min(min_abs, std::fabs(l.real()));
    max_re = std::max(max_re, l.real());
  }
  if (margin) *margin = min_abs;
  if (!(min_abs > kSpectrumMargin)) return SpectrumVerdict::marginal;
  return max_re < 0.0 ? SpectrumVerdict::stable : SpectrumVerdict::unstable;
}

JacobianReport jacobian_report(const Equilibrium& eq, const ControllerParams& p, double q_r) {
  if (!eq.exists) throw EquilibriumMissing(std::string(to_string(eq.kind)) + " does not exist for these parameters");
  JacobianReport rep;
  rep.kind = eq.kind;
  if (eq.kind == EquilibriumKind::eq1 || eq.kind == EquilibriumKind::eq2) {
    rep.analytic = jacobian_eq1_analytic(p, q_r);
    rep.entries = assemble_eq1(*rep.analytic, p.h, p.omega, eq.kind == EquilibriumKind::eq2);
    rep.eigenvalues = characteristic_eq1(*rep.analytic, p.h).roots();
    rep.hurwitz = hurwitz_eq1(p, q_r).verdict;
  } else {
    rep.entries = jacobian_numeric(eq.state, p, q_r);
    rep.eigenvalues = block_eigenvalues(scaled(rep.entries, p.omega));
    rep.hurwitz = hurwitz_eq3(p, q_r).verdict;
  }
  rep.spectrum = classify(rep.eigenvalues, &rep.margin);
  return rep;
}

}  // namespace esseek
