#include "esseek/simulator.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "esseek/errors.hpp"

namespace esseek {

namespace {

// Joint state (x, y, z, alpha, theta, eta).
using Joint = std::array<double, 6>;

Joint pack(const ClosedLoopState& s) {
  return {s.vehicle.r_c.x, s.vehicle.r_c.y, s.vehicle.r_c.z, s.vehicle.alpha, s.vehicle.theta, s.washout.eta};
}

ClosedLoopState unpack(const Joint& y) { return {{{y[0], y[1], y[2]}, y[3], y[4]}, {y[5]}}; }

Joint derivative(const Joint& y, double t, const SimConfig& config) {
  const ClosedLoopState s = unpack(y);
  const double J = eval_field(config.field, sensor_position(s.vehicle, config.params.R));
  const double xi = washout_output(s.washout, J);
  const ControlCommand u = control(xi, t, config.params);
  const VehicleRates rates = kinematics_rhs(s.vehicle, u.v, u.psi_alpha, u.psi_theta);
  return {rates.r_c_dot.x, rates.r_c_dot.y, rates.r_c_dot.z, rates.alpha_dot, rates.theta_dot,
          washout_rhs(s.washout, J, config.params.h)};
}

Joint axpy(const Joint& y, double a, const Joint& k) {
  Joint out;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = y[i] + a * k[i];
  return out;
}

double period(double omega) { return 2.0 * std::numbers::pi / omega; }

// Per-window sums over complete windows of length 2 pi / omega from t_from.
template <class Accumulate>
std::size_t for_each_window_sample(const Trajectory& traj, double t_from, double omega, Accumulate&& acc) {
  if (traj.empty() || !(omega > 0.0)) return 0;
  const double P = period(omega);
  const double eps = 1e-9 * P;
  const double t_last = traj.back().t;
  if (t_last + eps < t_from + P) return 0;
  const auto windows = static_cast<std::size_t>(std::floor((t_last - t_from) / P + 1e-9));
  for (const auto& row : traj) {
    if (row.t + eps < t_from) continue;
    const double k = std::floor((row.t - t_from) / P + 1e-9);
    if (k < 0.0) continue;
    const auto idx = static_cast<std::size_t>(k);
    if (idx >= windows) break;
    acc(idx, row);
  }
  return windows;
}

}  // namespace

double SimConfig::default_dt(double omega) { return period(omega) / 64.0; }

void SimConfig::validate() const {
  params.validate();
  esseek::validate(field);
  if (!is_finite(initial.r_c) || !std::isfinite(initial.alpha) || !std::isfinite(initial.theta)) {
    throw InvalidParameter("initial state must be finite");
  }
  if (!(std::isfinite(dt) && dt > 0.0)) throw InvalidParameter("dt must be finite and strictly positive");
  if (!(std::isfinite(t_end) && t_end >= 0.0)) throw InvalidParameter("t_end must be finite and non-negative");
  if (record_stride < 1) throw InvalidParameter("record_stride must be at least 1");
  // 32 steps per probing period at minimum; tiny slack for dt given as a rounded decimal.
  if (dt * params.omega > (2.0 * std::numbers::pi / 32.0) * (1.0 + 1e-12)) {
    throw InvalidParameter("dt must resolve each probing period with at least 32 steps (dt * omega <= 2 pi / 32)");
  }
}

std::size_t SimConfig::step_count() const {
  return static_cast<std::size_t>(std::floor(t_end / dt + 1e-9));
}

ClosedLoopState initial_state(const SimConfig& config) {
  const double J0 = eval_field(config.field, sensor_position(config.initial, config.params.R));
  return {config.initial, {J0}};
}

ClosedLoopState step(const ClosedLoopState& state, double t, const SimConfig& config, std::size_t step_index) {
  const double dt = config.dt;
  const Joint y = pack(state);
  const Joint k1 = derivative(y, t, config);
  const Joint k2 = derivative(axpy(y, 0.5 * dt, k1), t + 0.5 * dt, config);
  const Joint k3 = derivative(axpy(y, 0.5 * dt, k2), t + 0.5 * dt, config);
  const Joint k4 = derivative(axpy(y, dt, k3), t + dt, config);
  Joint next;
  for (std::size_t i = 0; i < next.size(); ++i) {
    next[i] = y[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    if (!std::isfinite(next[i])) {
      throw SimulationDiverged(step_index, "non-finite state after integrator step " +
                                               std::to_string(step_index) + " (t = " + std::to_string(t + dt) +
                                               ")");
    }
  }
  return unpack(next);
}

TrajectoryRow observe(const ClosedLoopState& state, double t, const SimConfig& config) {
  const double J = eval_field(config.field, sensor_position(state.vehicle, config.params.R));
  const double xi = washout_output(state.washout, J);
  const ControlCommand u = control(xi, t, config.params);
  return {t, state.vehicle.r_c, state.vehicle.alpha, state.vehicle.theta, J, xi, u.v, u.psi_alpha, u.psi_theta};
}

Trajectory run(const SimConfig& config) {
  config.validate();
  const std::size_t n = config.step_count();
  Trajectory traj;
  traj.reserve(n / config.record_stride + 1);
  ClosedLoopState state = initial_state(config);
  traj.push_back(observe(state, 0.0, config));
  for (std::size_t i = 0; i < n; ++i) {
    // Time from the step index, not by accumulation, so runs are reproducible bit for bit.
    const double t = static_cast<double>(i) * config.dt;
    state = step(state, t, config, i);
    if ((i + 1) % config.record_stride == 0) {
      traj.push_back(observe(state, static_cast<double>(i + 1) * config.dt, config));
    }
  }
  return traj;
}

double wrap_angle(double angle) {
  const double two_pi = 2.0 * std::numbers::pi;
  double w = std::fmod(angle + std::numbers::pi, two_pi);
  if (w < 0.0) w += two_pi;
  w -= std::numbers::pi;
  // fmod maps +pi to -pi; the interval is (-pi, pi].
  return w == -std::numbers::pi ? std::numbers::pi : w;
}

ErrorCoords error_coords(const VehicleState& state, const WashoutState& washout, double t,
                         const ControllerParams& params, const FieldSpec& field) {
  ErrorCoords ec;
  const Vec3 rel = state.r_c - source_location(field);
  ec.r_tilde = norm(rel);
  ec.alpha_hat = state.alpha - params.a * std::sin(params.omega * t);
  ec.theta_hat = state.theta - params.a * std::cos(params.omega * t);
  if (ec.r_tilde > 0.0) {
    ec.alpha_star = std::atan2(-rel.z, std::hypot(rel.x, rel.y));
    ec.theta_star = std::atan2(-rel.y, -rel.x);
    ec.theta_tilde = wrap_angle(ec.theta_hat - ec.theta_star);
  } else {
    ec.angles_defined = false;
    ec.alpha_star = ec.theta_star = ec.theta_tilde = std::numeric_limits<double>::quiet_NaN();
  }
  if (const auto* q = std::get_if<QuadraticSpherical>(&field)) {
    ec.e_hat = (washout.eta - q->f_star) + q->q_r * params.R * params.R;
  }
  return ec;
}

ErrorCoords error_coords(const TrajectoryRow& row, const ControllerParams& params, const FieldSpec& field) {
  return error_coords(row.vehicle(), WashoutState{row.eta()}, row.t, params, field);
}

std::vector<double> per_period_average(const Trajectory& traj, const ColumnFn& column, double t_from,
                                       double omega) {
  std::vector<double> sum;
  std::vector<std::size_t> count;
  const std::size_t windows = for_each_window_sample(traj, t_from, omega, [&](std::size_t k, const TrajectoryRow& r) {
    if (sum.size() <= k) {
      sum.resize(k + 1, 0.0);
      count.resize(k + 1, 0);
    }
    sum[k] += column(r);
    ++count[k];
  });
  std::vector<double> out;
  out.reserve(windows);
  for (std::size_t k = 0; k < std::min(windows, sum.size()); ++k) {
    if (count[k] == 0) break;
    out.push_back(sum[k] / static_cast<double>(count[k]));
  }
  return out;
}

std::vector<double> per_period_circular_mean(const Trajectory& traj, const ColumnFn& column, double t_from,
                                             double omega) {
  std::vector<double> s;
  std::vector<double> c;
  const std::size_t windows = for_each_window_sample(traj, t_from, omega, [&](std::size_t k, const TrajectoryRow& r) {
    if (s.size() <= k) {
      s.resize(k + 1, 0.0);
      c.resize(k + 1, 0.0);
    }
    const double a = column(r);
    s[k] += std::sin(a);
    c[k] += std::cos(a);
  });
  std::vector<double> out;
  for (std::size_t k = 0; k < std::min(windows, s.size()); ++k) out.push_back(std::atan2(s[k], c[k]));
  return out;
}

RunSummary summarize(const Trajectory& traj, const SimConfig& config, std::size_t periods) {
  RunSummary out;
  if (traj.empty()) return out;
  const Vec3& r_star = source_location(config.field);
  out.final_distance = norm(traj.back().r_c - r_star);

  const auto r_means = per_period_average(traj, [&](const TrajectoryRow& r) { return norm(r.r_c - r_star); }, 0.0,
                                          config.params.omega);
  const auto alpha_means = per_period_average(traj, [](const TrajectoryRow& r) { return r.alpha; }, 0.0,
                                              config.params.omega);
  const auto theta_means = per_period_circular_mean(
      traj, [&](const TrajectoryRow& r) { return error_coords(r, config.params, config.field).theta_tilde; }, 0.0,
      config.params.omega);
  if (r_means.empty()) return out;

  const std::size_t n = r_means.size();
  const std::size_t used = std::min(periods, n);
  out.periods = used;
  double rs = 0.0, as = 0.0, ss = 0.0, cs = 0.0, amax = 0.0;
  for (std::size_t k = n - used; k < n; ++k) {
    rs += r_means[k];
    as += alpha_means[k];
    ss += std::sin(theta_means[k]);
    cs += std::cos(theta_means[k]);
    amax = std::max(amax, std::abs(alpha_means[k]));
  }
  out.mean_r_tilde = rs / static_cast<double>(used);
  out.mean_alpha = as / static_cast<double>(used);
  out.mean_theta_tilde = std::atan2(ss, cs);
  out.max_abs_period_alpha = amax;

  const double band = 0.1 * out.mean_r_tilde;
  std::size_t first = n;
  for (std::size_t k = n; k-- > 0;) {
    if (std::abs(r_means[k] - out.mean_r_tilde) > band) break;
    first = k;
  }
  if (n >= periods && first < n) out.settle_time = static_cast<double>(first) * period(config.params.omega);
  return out;
}

}  // namespace esseek
