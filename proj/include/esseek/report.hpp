#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

#include "esseek/averaging.hpp"
#include "esseek/scenario.hpp"
#include "esseek/simulator.hpp"
#include "esseek/stability.hpp"

namespace esseek {

inline constexpr const char* kTrajectoryHeader = "t,x,y,z,alpha,theta,J,xi,v,psi_alpha,psi_theta";
inline constexpr const char* kAveragedHeader = "tau,t,r_tilde,alpha_star,alpha_hat,theta_tilde,e_hat";

void write_trajectory_csv(std::ostream& out, const Trajectory& traj);
/// Throws InvalidParameter on a header mismatch or malformed row (message names the line).
Trajectory read_trajectory_csv(std::istream& in);

struct AveragedRow {
  double tau{0.0};
  AveragedState state{};
};

void write_averaged_csv(std::ostream& out, const std::vector<AveragedRow>& rows, double omega);
std::vector<AveragedRow> read_averaged_csv(std::istream& in);

/// Integrates the averaged system with RK4 from `start` for tau in [0, tau_end],
/// one row per step. Propagates SingularState.
std::vector<AveragedRow> run_averaged(const AveragedState& start, const ControllerParams& p, double q_r,
                                      double tau_end, double dtau);

nlohmann::json to_json(const Vec3& v);
nlohmann::json to_json(const AveragedState& s);
nlohmann::json to_json(const Matrix5& m);
nlohmann::json to_json(const std::array<Complex, 5>& roots);

nlohmann::json summary_json(const RunSummary& s, const ScenarioConfig& cfg);

/// Constants, the four equilibria with existence flags and residuals.
nlohmann::json analysis_json(const ControllerParams& p, double q_r);

/// Per-equilibrium Jacobians and roots, Routh-Hurwitz booleans, corollary gate.
nlohmann::json stability_json(const ControllerParams& p, double q_r);

/// Read back a JSON document from a stream (throws InvalidParameter on parse errors).
nlohmann::json read_json(std::istream& in);

/// Writes text to path, creating parent directories. Throws InvalidParameter on I/O failure.
void write_file(const std::string& path, const std::string& text);

/// Splits one CSV line on commas (no quoting in the formats written here).
std::vector<std::string> split_csv_line(const std::string& line);

}  // namespace esseek
