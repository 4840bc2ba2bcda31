#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "esseek/controller.hpp"
#include "esseek/fields.hpp"
#include "esseek/vehicle.hpp"

namespace esseek {

struct SimConfig {
  ControllerParams params{};
  FieldSpec field{QuadraticSpherical{}};
  VehicleState initial{};
  double dt{0.0};
  double t_end{0.0};
  std::size_t record_stride{1};

  /// One probing period resolved by 64 steps.
  static double default_dt(double omega);

  /// Checks params, field, dt > 0, t_end >= 0, stride >= 1 and at least
  /// 32 steps per probing period. Throws InvalidParameter.
  void validate() const;

  /// Number of integrator steps covering [0, t_end].
  std::size_t step_count() const;
};

struct ClosedLoopState {
  VehicleState vehicle{};
  WashoutState washout{};
};

/// Washout initialised on the sensor reading at t = 0, so xi(0) = 0 and v(0) = V_c.
ClosedLoopState initial_state(const SimConfig& config);

/// One classical RK4 step of size config.dt from time t. The field and the
/// control law are evaluated at every stage. Throws SimulationDiverged
/// (carrying `step_index`) if the new state is not finite.
ClosedLoopState step(const ClosedLoopState& state, double t, const SimConfig& config,
                     std::size_t step_index = 0);

struct TrajectoryRow {
  double t{0.0};
  Vec3 r_c{};
  double alpha{0.0};
  double theta{0.0};
  double J{0.0};
  double xi{0.0};
  double v{0.0};
  double psi_alpha{0.0};
  double psi_theta{0.0};

  double eta() const { return J - xi; }
  VehicleState vehicle() const { return {r_c, alpha, theta}; }
};

using Trajectory = std::vector<TrajectoryRow>;

/// Sensor reading, washout output and control command at a given state.
TrajectoryRow observe(const ClosedLoopState& state, double t, const SimConfig& config);

/// Integrates from 0 to t_end, keeping every record_stride-th step
/// (row count = floor(t_end / dt / stride) + 1). Deterministic.
Trajectory run(const SimConfig& config);

/// Source-relative coordinates of the reduced error system.
struct ErrorCoords {
  double r_tilde{0.0};
  double alpha_star{0.0};
  double theta_star{0.0};
  double alpha_hat{0.0};
  double theta_hat{0.0};
  double theta_tilde{0.0};  // wrapped to (-pi, pi]
  std::optional<double> e_hat;  // spherical quadratic fields only
  bool angles_defined{true};    // false when r_tilde == 0
};

/// theta_star is the polar angle of -(r_c - r*), i.e. of the direction from
/// the vehicle to the source; alpha_star its elevation.
ErrorCoords error_coords(const VehicleState& state, const WashoutState& washout, double t,
                         const ControllerParams& params, const FieldSpec& field);

ErrorCoords error_coords(const TrajectoryRow& row, const ControllerParams& params, const FieldSpec& field);

/// Maps an angle to (-pi, pi].
double wrap_angle(double angle);

using ColumnFn = std::function<double(const TrajectoryRow&)>;

/// Arithmetic mean of `column` over consecutive windows of length 2 pi / omega
/// starting at t_from. Only complete windows are returned; empty if none fit.
std::vector<double> per_period_average(const Trajectory& traj, const ColumnFn& column, double t_from,
                                       double omega);

/// Same windows, circular mean (atan2 of mean sin and mean cos) for angles.
std::vector<double> per_period_circular_mean(const Trajectory& traj, const ColumnFn& column,
                                             double t_from, double omega);

struct RunSummary {
  double final_distance{0.0};
  std::size_t periods{0};              // windows used for the means below
  double mean_r_tilde{0.0};
  double mean_alpha{0.0};
  double mean_theta_tilde{0.0};        // circular mean, (-pi, pi]
  double max_abs_period_alpha{0.0};    // max over windows of |per-window mean alpha|
  std::optional<double> settle_time;   // start of the earliest window after which every
                                       // per-window mean r_tilde stays within 10% of mean_r_tilde
};

/// Means over the last `periods` complete probing periods.
RunSummary summarize(const Trajectory& traj, const SimConfig& config, std::size_t periods = 10);

}  // namespace esseek
