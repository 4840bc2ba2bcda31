#pragma once

#include <array>
#include <optional>
#include <string_view>

#include "esseek/averaging.hpp"
#include "esseek/polynomial.hpp"

namespace esseek {

using Matrix5 = std::array<std::array<double, 5>, 5>;

/// Nonzero entries of omega * J at eq1 (row/col order r, alpha*, alpha_hat, theta~, e_hat).
/// (5,5) is always -h.
struct Eq1Entries {
  double m11{0.0};
  double m15{0.0};
  double m22{0.0};
  double m23{0.0};
  double m32{0.0};
  double m33{0.0};
  double m44{0.0};
  double m51{0.0};
};

/// Closed forms at eq1. Throws DegenerateParameters if J0(sqrt(2) a) or rho1 vanish.
Eq1Entries jacobian_eq1_analytic(const ControllerParams& p, double q_r);

/// J = M / omega with M assembled from the entries; eq2_signs flips (1,5), (2,3), (3,2), (5,1).
Matrix5 assemble_eq1(const Eq1Entries& m, double h, double omega, bool eq2_signs = false);

/// Central finite differences of averaged_rhs (d/dtau, so carries 1/omega)
/// with step max(1e-6, 1e-6 |x_i|). Propagates SingularState.
Matrix5 jacobian_numeric(const AveragedState& at, const ControllerParams& p, double q_r);

Matrix5 scaled(const Matrix5& m, double factor);

/// Factored characteristic polynomial of omega J^eq1 in the variable s:
///   (s^2 + q1[0] s + q1[1]) (s - m44) (s^2 + q2[0] s + q2[1])
struct CharacteristicEq1 {
  std::array<double, 2> quad1{};  // -(m22 + m33), m22 m33 - m23 m32
  double m44{0.0};
  std::array<double, 2> quad2{};  // h - m11, -m11 h - m15 m51

  Complex evaluate(Complex s) const;
  /// Coefficients of the expanded monic quintic below the leading 1 (degree 4 down to 0).
  std::array<double, 5> expanded() const;
  std::array<Complex, 5> roots() const;
};

CharacteristicEq1 characteristic_eq1(const Eq1Entries& m, double h);

struct Eq1Hurwitz {
  std::array<bool, 5> raw{};       // m22+m33<0, m22 m33-m23 m32>0, m44<0, h-m11>0, -m11 h-m15 m51>0
  // Rewritten in phi1..phi4, rho1, ordered: raw[0], raw[2], raw[3], raw[1], raw[4].
  std::array<bool, 5> explicit_{};
  bool verdict{false};             // all raw conditions hold
};

Eq1Hurwitz hurwitz_eq1(const ControllerParams& p, double q_r);

struct Eq3Hurwitz {
  Matrix5 l{};                // omega * J^eq3, numeric
  double k1{0.0};
  double k2{0.0};
  double k3{0.0};
  std::array<bool, 6> conditions{};  // l22+l33<0, l22 l33-l23 l32>0, k1>0, k2>0, k3>0, k1 k2-k3>0
  bool verdict{false};
};

/// Throws EquilibriumMissing when eq3 does not exist for these parameters.
Eq3Hurwitz hurwitz_eq3(const ControllerParams& p, double q_r);

/// k coefficients of the 3x3 (r, theta~, e_hat) block with l55 replaced by -h.
std::array<double, 3> k_coefficients(const Matrix5& l, double h);

struct CorollaryGate {
  bool corollary1{false};
  bool corollary2{false};
  std::optional<double> vc_bar;
};

/// corollary1: a in [1.75, 2.5]. corollary2: a in [1.25, 1.65] and V_c < vc_bar.
CorollaryGate corollary_gate(const ControllerParams& p, double q_r);

/// Eigenvalues of a matrix with the block pattern {alpha*, alpha_hat} x {r, theta~, e_hat}:
/// 2x2 block by the quadratic formula, 3x3 block by the cubic. Entries coupling
/// the two blocks are ignored.
std::array<Complex, 5> block_eigenvalues(const Matrix5& m);

/// Largest magnitude among entries coupling the two blocks.
double off_block_magnitude(const Matrix5& m);

enum class SpectrumVerdict { stable, unstable, marginal };

std::string_view to_string(SpectrumVerdict v);

constexpr double kSpectrumMargin = 1e-8;

/// marginal if min |Re| <= kSpectrumMargin, else stable iff every Re < 0.
SpectrumVerdict classify(const std::array<Complex, 5>& eigenvalues, double* margin = nullptr);

struct JacobianReport {
  EquilibriumKind kind{EquilibriumKind::eq1};
  Matrix5 entries{};                      // J (scaled by 1/omega)
  std::optional<Eq1Entries> analytic;     // eq1 / eq2 only
  std::array<Complex, 5> eigenvalues{};   // of omega J
  double margin{0.0};                     // min |Re| over eigenvalues
  SpectrumVerdict spectrum{SpectrumVerdict::marginal};
  bool hurwitz{false};                    // Routh-Hurwitz verdict
};

/// Report for an existing equilibrium. Analytic entries for eq1/eq2, numeric otherwise.
JacobianReport jacobian_report(const Equilibrium& eq, const ControllerParams& p, double q_r);

}  // namespace esseek
