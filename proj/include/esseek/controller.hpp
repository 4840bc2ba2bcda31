#pragma once

namespace esseek {

/// Tunable scalars of the extremum-seeking loop. All must be strictly positive.
struct ControllerParams {
  double a{2.0};          // perturbation amplitude (rad)
  double c_alpha{100.0};  // pitch adaptation gain
  double c_theta{100.0};  // yaw adaptation gain
  double b{5.0};          // forward-velocity gain on the washout output
  double h{10.0};         // washout cutoff (1/s)
  double V_c{0.001};      // bias forward velocity
  double omega{40.0};     // probing frequency (rad/s)
  double R{0.1};          // sensor offset from the vehicle center

  /// Throws InvalidParameter naming the first field that is not finite and > 0.
  void validate() const;
};

/// Low-pass state eta = h/(s+h)[J]. The washout output is xi = J - eta,
/// so the unknown peak value f* never enters the filter.
struct WashoutState {
  double eta{0.0};
};

/// d eta / dt = h (J - eta)
double washout_rhs(const WashoutState& ws, double J, double h);

/// xi = s/(s+h)[J] = J - eta
double washout_output(const WashoutState& ws, double J);

struct ControlCommand {
  double v{0.0};
  double psi_alpha{0.0};
  double psi_theta{0.0};
};

/// v = V_c + b xi (not clamped at zero),
/// psi_alpha = a w cos(w t) + c_alpha xi sin(w t),
/// psi_theta = -a w sin(w t) + c_theta xi cos(w t).
ControlCommand control(double xi, double t, const ControllerParams& p);

}  // namespace esseek
