#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "esseek/averaging.hpp"
#include "esseek/scenario.hpp"

namespace esseek {

/// One grid dimension: "key=from:to:step" (inclusive) or "key=v1,v2,...".
/// Keys use the config override syntax ("a", "controller.V_c", "field.q_r").
struct GridAxis {
  std::string key;
  std::vector<double> values;
};

GridAxis parse_axis(std::string_view spec);

using GridPoint = std::vector<std::pair<std::string, double>>;

/// Cartesian product, first axis varying slowest. No axes gives no points.
std::vector<GridPoint> expand_grid(const std::vector<GridAxis>& axes);

/// Base scenario with the point's assignments applied.
ScenarioConfig apply_point(const ScenarioConfig& base, const GridPoint& point);

enum class Execution { serial, parallel };

struct AnalyzeRow {
  GridPoint point;
  std::optional<double> gamma1;
  std::array<bool, 4> exists{};
  std::array<double, 4> radius{};  // NaN where the equilibrium does not exist
  std::optional<bool> hurwitz_eq1;
  std::string spectrum_eq1;        // stable / unstable / marginal, empty on error
  std::optional<bool> hurwitz_eq3; // present when eq3 exists
  bool corollary1{false};
  bool corollary2{false};
  std::optional<double> vc_bar;
  std::string error;               // non-empty when the analysis threw
};

struct SimulateRow {
  GridPoint point;
  double final_distance{0.0};
  double mean_r_tilde{0.0};
  double mean_alpha{0.0};
  double mean_theta_tilde{0.0};
  std::optional<double> settle_time;
  std::string predicted_kind;      // equilibrium used for the prediction, empty if none
  std::optional<double> predicted_radius;
  std::optional<double> deviation; // |mean_r_tilde - predicted_radius|
  std::string error;
};

AnalyzeRow analyze_point(const ScenarioConfig& base, const GridPoint& point);
SimulateRow simulate_point(const ScenarioConfig& base, const GridPoint& point);

/// Identical results for both execution modes; rows keep grid order.
std::vector<AnalyzeRow> sweep_analyze(const ScenarioConfig& base, const std::vector<GridPoint>& grid,
                                      Execution exec = Execution::parallel);
std::vector<SimulateRow> sweep_simulate(const ScenarioConfig& base, const std::vector<GridPoint>& grid,
                                        Execution exec = Execution::parallel);

/// Batch of independent full simulations (one trajectory per config).
std::vector<Trajectory> run_batch(const std::vector<SimConfig>& configs, Execution exec = Execution::parallel);

/// The equilibrium the averaged analysis predicts for a run: the first existing
/// Hurwitz one among eq1/eq2 then eq3, else the first existing one.
std::optional<Equilibrium> predicted_equilibrium(const ControllerParams& p, double q_r);

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

Table to_table(const std::vector<GridAxis>& axes, const std::vector<AnalyzeRow>& rows);
Table to_table(const std::vector<GridAxis>& axes, const std::vector<SimulateRow>& rows);

void write_table_csv(std::ostream& out, const Table& t);
Table read_table_csv(std::istream& in);

}  // namespace esseek
