#include "esseek/vehicle.hpp"

#include <cmath>

namespace esseek {

Vec3 heading(double alpha, double theta) {
  const double ca = std::cos(alpha);
  return {ca * std::cos(theta), ca * std::sin(theta), std::sin(alpha)};
}

VehicleRates kinematics_rhs(const VehicleState& state, double v, double psi_alpha, double psi_theta) {
  return {v * heading(state.alpha, state.theta), psi_alpha, psi_theta};
}

Vec3 sensor_position(const VehicleState& state, double R) {
  return state.r_c + R * heading(state.alpha, state.theta);
}

}  // namespace esseek
