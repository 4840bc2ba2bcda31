#pragma once

#include <array>
#include <optional>
#include <string_view>

#include "esseek/controller.hpp"

namespace esseek {

/// Averaged error coordinates (r_tilde, alpha_star, alpha_hat, theta_tilde, e_hat).
struct AveragedState {
  double r_tilde{0.0};
  double alpha_star{0.0};
  double alpha_hat{0.0};
  double theta_tilde{0.0};
  double e_hat{0.0};

  std::array<double, 5> to_array() const { return {r_tilde, alpha_star, alpha_hat, theta_tilde, e_hat}; }
  static AveragedState from_array(const std::array<double, 5>& v) { return {v[0], v[1], v[2], v[3], v[4]}; }
};

/// Period averages over tau in [0, 2 pi] of the trigonometric products that
/// appear in the error system, with x = alpha_hat + a sin tau and
/// y = theta_tilde + a cos tau:
///   xi_c     = cos x cos(alpha*) cos y + sin x sin(alpha*)
///   B        = sin x cos(alpha*) - cos x sin(alpha*) cos y
///   C        = cos x sin y
struct XiAverages {
  double c{0.0};        // <xi_c>
  double c2{0.0};       // <xi_c^2>
  double alpha{0.0};    // <B>
  double c_alpha{0.0};  // <xi_c B>
  double c_sin{0.0};    // <xi_c sin tau>
  double c_cos{0.0};    // <xi_c cos tau>
  double c_cossin{0.0}; // <xi_c C>
  double cossin{0.0};   // <C>
};

/// Closed forms in J0, J1 of sqrt(2) a, a, 2a, 2 sqrt(2) a and sqrt(5) a.
XiAverages xi_averages(const AveragedState& s, double a);

/// d/dtau of the averaged error system, tau = omega t. Every component carries 1/omega.
/// Throws SingularState if r_tilde <= 0 or |cos(alpha_star)| < 1e-9.
std::array<double, 5> averaged_rhs(const AveragedState& s, const ControllerParams& p, double q_r);

struct AnalysisConstants {
  double j0_s2a{0.0};  // J0(sqrt(2) a)
  double j1_s2a{0.0};  // J1(sqrt(2) a)
  double rho1{0.0};
  double rho2{0.0};
  double gamma1{0.0};
  double gamma2{0.0};
  double gamma3{0.0};
  std::optional<double> mu0;  // present only when 2 gamma3 >= 1
  double e1{0.0};
  double e2{0.0};
  double phi1{0.0};
  double phi2{0.0};
  double phi3{0.0};
  double phi4{0.0};
};

/// rho1 = 2 J0(sqrt2 a)^2 - phi4 / 2, phi4 = J0(2 sqrt2 a) + 2 J0(2a) + 1,
/// rho2 = sqrt2 b (1 - J0(2 sqrt2 a)) / (4 c_theta J1(sqrt2 a)),
/// gamma1 = V_c J0(sqrt2 a) / (b q_r R rho1), gamma2 = 2 J0^2 + V_c J0 / (b q_r R rho2),
/// gamma3 = (J0(2 sqrt2 a) + J0(2a) - gamma2) / (J0(2 sqrt2 a) - 1),
/// e1 = -q_r gamma1^2 + 2 q_r R gamma1 J0, e2 = -2 q_r gamma3 rho2^2 - 2 q_r R rho2 J0.
/// Throws InvalidParameter for invalid params and DegenerateParameters naming
/// the vanishing divisor.
AnalysisConstants constants(const ControllerParams& p, double q_r);

enum class EquilibriumKind { eq1, eq2, eq3, eq4 };

std::string_view to_string(EquilibriumKind kind);

struct Equilibrium {
  EquilibriumKind kind{EquilibriumKind::eq1};
  AveragedState state{};
  bool exists{false};
};

/// eq1 = (gamma1, 0, 0, 0, e1), eq2 = (-gamma1, 0, 0, pi, e1),
/// eq3/eq4 = (rho2 sqrt(2 gamma3), 0, 0, +-mu0, e2).
/// Always four slots in kind order; states of undefined equilibria are NaN.
std::array<Equilibrium, 4> equilibria(const ControllerParams& p, double q_r);
std::array<Equilibrium, 4> equilibria(const AnalysisConstants& c);

/// Max-norm of averaged_rhs at the state.
double residual(const AveragedState& s, const ControllerParams& p, double q_r);

/// Classical RK4 on the averaged system in tau.
AveragedState averaged_step(const AveragedState& s, double dtau, const ControllerParams& p, double q_r);

}  // namespace esseek
