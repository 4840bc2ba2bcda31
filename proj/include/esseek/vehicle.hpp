#pragma once

#include "esseek/vec3.hpp"

namespace esseek {

// Pose of the vehicle center. Angles are accumulated, never wrapped.
struct VehicleState {
  Vec3 r_c{};
  double alpha{0.0};  // pitch (rad)
  double theta{0.0};  // yaw (rad)
};

struct VehicleRates {
  Vec3 r_c_dot{};
  double alpha_dot{0.0};
  double theta_dot{0.0};
};

/// (cos a cos t, cos a sin t, sin a)
Vec3 heading(double alpha, double theta);

VehicleRates kinematics_rhs(const VehicleState& state, double v, double psi_alpha, double psi_theta);

/// Sensor mounted a distance R ahead of the center along the heading.
Vec3 sensor_position(const VehicleState& state, double R);

}  // namespace esseek
