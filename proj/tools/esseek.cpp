#include <cmath>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "esseek/averaging.hpp"
#include "esseek/errors.hpp"
#include "esseek/report.hpp"
#include "esseek/scenario.hpp"
#include "esseek/simulator.hpp"
#include "esseek/stability.hpp"
#include "esseek/sweep.hpp"

namespace {

using namespace esseek;

enum Exit { kOk = 0, kConfig = 2, kNumerical = 3, kDegenerate = 4 };

struct ConfigOptions {
  std::string config;
  std::string preset;
  std::string out;
  std::optional<double> omega;
  std::optional<double> t_end;
  std::optional<double> dt;
  std::vector<std::string> sets;

  void attach(CLI::App* cmd) {
    cmd->add_option("--config", config, "Scenario INI file");
    cmd->add_option("--preset", preset, "Built-in scenario")->check(CLI::IsMember(preset_names()));
    cmd->add_option("--out", out, "Output directory (default: scenario outputs)");
    cmd->add_option("--omega", omega, "Probing frequency override (rad/s)");
    cmd->add_option("--t-end", t_end, "Simulated time override (s)");
    cmd->add_option("--dt", dt, "Step size override (s)");
    cmd->add_option("--set", sets, "Override, section.key=value (repeatable)");
  }

  ScenarioConfig resolve() const {
    if (!config.empty() && !preset.empty()) throw InvalidParameter("--config and --preset are mutually exclusive");
    ScenarioConfig cfg = !config.empty() ? load_config(config) : preset.empty() ? ScenarioConfig{} : esseek::preset(preset);
    for (const auto& s : sets) apply_assignment(cfg, s);
    if (omega) cfg.params.omega = *omega;
    if (t_end) cfg.t_end = *t_end;
    if (dt) cfg.dt = *dt;
    if (!out.empty()) cfg.outputs = out;
    return cfg;
  }
};

std::string join(const std::string& dir, const std::string& file) {
  return (std::filesystem::path(dir) / file).string();
}

int cmd_simulate(const ConfigOptions& opt) {
  const ScenarioConfig cfg = opt.resolve();
  cfg.validate();
  const SimConfig sim = cfg.sim();
  const Trajectory traj = run(sim);
  const RunSummary s = summarize(traj, sim);

  std::ostringstream csv;
  write_trajectory_csv(csv, traj);
  write_file(join(cfg.outputs, "trajectory.csv"), csv.str());
  write_file(join(cfg.outputs, "summary.json"), summary_json(s, cfg).dump(2) + "\n");
  write_file(join(cfg.outputs, "config.ini"), serialize(cfg));

  std::cout << "simulate " << cfg.name << ": rows=" << traj.size() << " final_distance=" << format_double(s.final_distance)
            << " mean_r_tilde=" << format_double(s.mean_r_tilde) << " mean_alpha=" << format_double(s.mean_alpha)
            << " mean_theta_tilde=" << format_double(s.mean_theta_tilde) << " periods=" << s.periods
            << " settle_time=" << (s.settle_time ? format_double(*s.settle_time) : std::string("none"))
            << " out=" << cfg.outputs << "\n";
  return kOk;
}

int cmd_analyze(const ConfigOptions& opt) {
  const ScenarioConfig cfg = opt.resolve();
  cfg.validate();
  const double q_r = field_q_r(cfg.field);
  const auto analysis = analysis_json(cfg.params, q_r);
  const auto stability = stability_json(cfg.params, q_r);
  write_file(join(cfg.outputs, "analysis.json"), analysis.dump(2) + "\n");
  write_file(join(cfg.outputs, "stability.json"), stability.dump(2) + "\n");

  std::cout << "analyze " << cfg.name << ": gamma1=" << format_double(analysis["constants"]["gamma1"].get<double>());
  for (const auto& e : analysis["equilibria"]) {
    std::cout << " " << e["kind"].get<std::string>() << "=" << (e["exists"].get<bool>() ? "exists" : "absent");
  }
  const auto& gate = stability["corollary_gate"];
  std::cout << " hurwitz_eq1=" << (stability["hurwitz_eq1"]["verdict"].get<bool>() ? "true" : "false");
  if (!stability["hurwitz_eq3"].is_null()) {
    std::cout << " hurwitz_eq3=" << (stability["hurwitz_eq3"]["verdict"].get<bool>() ? "true" : "false");
  }
  std::cout << " corollary1=" << (gate["corollary1"].get<bool>() ? "true" : "false")
            << " corollary2=" << (gate["corollary2"].get<bool>() ? "true" : "false");
  if (!gate["vc_bar"].is_null()) std::cout << " vc_bar=" << format_double(gate["vc_bar"].get<double>());
  std::cout << " out=" << cfg.outputs << "\n";
  return kOk;
}

struct AveragedOptions {
  std::string from{"initial"};
  std::string state;
  double perturb{0.0};
  double tau_end{1000.0};
  double dtau{0.05};
};

AveragedState averaged_start(const ScenarioConfig& cfg, const AveragedOptions& o) {
  AveragedState s;
  if (!o.state.empty()) {
    const auto cells = split_csv_line(o.state);
    if (cells.size() != 5) throw InvalidParameter("--state expects five comma-separated numbers");
    std::array<double, 5> v{};
    for (std::size_t i = 0; i < 5; ++i) v[i] = parse_double(cells[i], "--state");
    s = AveragedState::from_array(v);
  } else if (o.from == "initial") {
    const auto* q = std::get_if<QuadraticSpherical>(&cfg.field);
    if (!q) throw InvalidParameter("--from initial requires a quadratic_spherical field");
    const SimConfig sim = cfg.sim();
    const ClosedLoopState st = initial_state(sim);
    const ErrorCoords ec = error_coords(st.vehicle, st.washout, 0.0, cfg.params, cfg.field);
    if (!ec.angles_defined) throw SingularState("initial position coincides with the source");
    s = {ec.r_tilde, ec.alpha_star, ec.alpha_hat, ec.theta_tilde, *ec.e_hat};
  } else {
    const auto eqs = equilibria(cfg.params, field_q_r(cfg.field));
    const Equilibrium* chosen = nullptr;
    for (const auto& e : eqs) {
      if (to_string(e.kind) == o.from) chosen = &e;
    }
    if (!chosen) throw InvalidParameter("--from must be initial, eq1, eq2, eq3 or eq4");
    if (!chosen->exists) throw EquilibriumMissing(o.from + " does not exist for these parameters");
    s = chosen->state;
  }
  auto v = s.to_array();
  for (double& x : v) x += o.perturb;
  return AveragedState::from_array(v);
}

int cmd_averaged(const ConfigOptions& opt, const AveragedOptions& ao) {
  const ScenarioConfig cfg = opt.resolve();
  cfg.validate();
  const double q_r = field_q_r(cfg.field);
  const AveragedState start = averaged_start(cfg, ao);
  const auto rows = run_averaged(start, cfg.params, q_r, ao.tau_end, ao.dtau);
  std::ostringstream csv;
  write_averaged_csv(csv, rows, cfg.params.omega);
  write_file(join(cfg.outputs, "averaged.csv"), csv.str());
  const auto& last = rows.back().state;
  std::cout << "averaged " << cfg.name << ": rows=" << rows.size() << " r_tilde=" << format_double(last.r_tilde)
            << " alpha_star=" << format_double(last.alpha_star) << " alpha_hat=" << format_double(last.alpha_hat)
            << " theta_tilde=" << format_double(wrap_angle(last.theta_tilde))
            << " e_hat=" << format_double(last.e_hat) << " out=" << cfg.outputs << "\n";
  return kOk;
}

struct SweepOptions {
  std::vector<std::string> grid;
  std::string mode{"analyze"};
  bool serial{false};
};

int cmd_sweep(const ConfigOptions& opt, const SweepOptions& so) {
  const ScenarioConfig base = opt.resolve();
  std::vector<GridAxis> axes;
  for (const auto& g : so.grid) axes.push_back(parse_axis(g));
  const auto points = expand_grid(axes);
  // Validate every point up front so a bad axis is a config error rather than a table of failures.
  for (const auto& p : points) apply_point(base, p).validate();
  const Execution exec = so.serial ? Execution::serial : Execution::parallel;
  Table table;
  if (so.mode == "analyze") {
    table = to_table(axes, sweep_analyze(base, points, exec));
  } else {
    table = to_table(axes, sweep_simulate(base, points, exec));
  }
  std::ostringstream csv;
  write_table_csv(csv, table);
  const std::string path = join(base.outputs, "sweep_" + so.mode + ".csv");
  write_file(path, csv.str());
  std::cout << "sweep " << so.mode << ": points=" << points.size() << " out=" << path << "\n";
  return kOk;
}

int cmd_show_config(const ConfigOptions& opt) {
  const ScenarioConfig cfg = opt.resolve();
  cfg.validate();
  std::cout << serialize(cfg);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Extremum-seeking source seeking: simulation and averaged-system analysis"};
  app.require_subcommand(1);

  ConfigOptions sim_opt, ana_opt, ave_opt, swp_opt, show_opt;
  AveragedOptions ave;
  SweepOptions swp;

  auto* simulate = app.add_subcommand("simulate", "Integrate the closed loop; writes trajectory.csv, summary.json");
  sim_opt.attach(simulate);
  auto* analyze = app.add_subcommand("analyze", "Equilibria and stability; writes analysis.json, stability.json");
  ana_opt.attach(analyze);
  auto* averaged = app.add_subcommand("averaged", "Integrate the averaged system; writes averaged.csv");
  ave_opt.attach(averaged);
  averaged->add_option("--from", ave.from, "Start: initial (from the scenario), eq1, eq2, eq3 or eq4");
  averaged->add_option("--state", ave.state, "Start state r,alpha_star,alpha_hat,theta_tilde,e_hat");
  averaged->add_option("--perturb", ave.perturb, "Offset added to every start component");
  averaged->add_option("--tau-end", ave.tau_end, "Horizon in tau = omega t");
  averaged->add_option("--dtau", ave.dtau, "RK4 step in tau");
  auto* sweep = app.add_subcommand("sweep", "Grid over parameters; writes sweep_<mode>.csv");
  swp_opt.attach(sweep);
  sweep->add_option("--grid", swp.grid, "Axis key=from:to:step or key=v1,v2 (repeatable)");
  sweep->add_option("--mode", swp.mode, "analyze or simulate")->check(CLI::IsMember({"analyze", "simulate"}));
  sweep->add_flag("--serial", swp.serial, "Use the serial reference path");
  auto* show = app.add_subcommand("show-config", "Print the expanded scenario config");
  show_opt.attach(show);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfig;
  }

  try {
    if (simulate->parsed()) return cmd_simulate(sim_opt);
    if (analyze->parsed()) return cmd_analyze(ana_opt);
    if (averaged->parsed()) return cmd_averaged(ave_opt, ave);
    if (sweep->parsed()) return cmd_sweep(swp_opt, swp);
    if (show->parsed()) return cmd_show_config(show_opt);
  } catch (const InvalidParameter& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const SimulationDiverged& e) {
    std::cerr << "simulation diverged: " << e.what() << "\n";
    return kNumerical;
  } catch (const SingularState& e) {
    std::cerr << "singular state: " << e.what() << "\n";
    return kNumerical;
  } catch (const FieldDomainError& e) {
    std::cerr << "field domain error: " << e.what() << "\n";
    return kNumerical;
  } catch (const DegenerateParameters& e) {
    std::cerr << "analysis error: " << e.what() << "\n";
    return kDegenerate;
  } catch (const EquilibriumMissing& e) {
    std::cerr << "analysis error: " << e.what() << "\n";
    return kDegenerate;
  }
  return kConfig;
}
