#include "esseek/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>

#include "esseek/errors.hpp"
#include "esseek/report.hpp"
#include "esseek/stability.hpp"

namespace esseek {

namespace {

double round_grid(double v) {
  const double r = std::round(v * 1e12) / 1e12;
  return r == 0.0 ? 0.0 : r;  // no negative zero in tables
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return std::string(s.substr(b, e - b + 1));
}

std::string cell(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }
std::string cell(const std::optional<bool>& v) { return v ? (*v ? "true" : "false") : std::string(); }
std::string cell(bool v) { return v ? "true" : "false"; }
std::string cell(double v) { return std::isfinite(v) ? format_double(v) : std::string(); }

std::string sanitize(std::string s) {
  std::replace(s.begin(), s.end(), ',', ';');
  std::replace(s.begin(), s.end(), '\n', ' ');
  return s;
}

template <class Row, class Fn>
std::vector<Row> map_grid(const std::vector<GridPoint>& grid, Execution exec, Fn&& fn) {
  std::vector<Row> rows(grid.size());
  const auto n = static_cast<long>(grid.size());
  if (exec == Execution::parallel) {
#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < n; ++i) rows[static_cast<std::size_t>(i)] = fn(grid[static_cast<std::size_t>(i)]);
  } else {
    for (long i = 0; i < n; ++i) rows[static_cast<std::size_t>(i)] = fn(grid[static_cast<std::size_t>(i)]);
  }
  return rows;
}

}  // namespace

GridAxis parse_axis(std::string_view spec) {
  const auto eq = spec.find('=');
  if (eq == std::string_view::npos || eq == 0) {
    throw InvalidParameter("grid axis must be key=from:to:step or key=v1,v2 (got '" + std::string(spec) + "')");
  }
  GridAxis axis;
  axis.key = trim(spec.substr(0, eq));
  const std::string body = trim(spec.substr(eq + 1));
  const std::string what = "grid axis " + axis.key;
  if (body.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    for (std::size_t pos; (pos = body.find(':', start)) != std::string::npos; start = pos + 1) {
      parts.push_back(body.substr(start, pos - start));
    }
    parts.push_back(body.substr(start));
    if (parts.size() != 3) throw InvalidParameter(what + ": range must be from:to:step");
    const double from = parse_double(parts[0], what);
    const double to = parse_double(parts[1], what);
    const double step = parse_double(parts[2], what);
    if (!(std::isfinite(step) && step > 0.0)) throw InvalidParameter(what + ": step must be strictly positive");
    if (to >= from) {
      const auto n = static_cast<std::size_t>(std::floor((to - from) / step + 1e-9));
      for (std::size_t k = 0; k <= n; ++k) axis.values.push_back(round_grid(from + static_cast<double>(k) * step));
    }
  } else if (!body.empty()) {
    for (const auto& c : split_csv_line(body)) axis.values.push_back(round_grid(parse_double(c, what)));
  }
  return axis;
}

std::vector<GridPoint> expand_grid(const std::vector<GridAxis>& axes) {
  if (axes.empty()) return {};
  std::vector<GridPoint> points{GridPoint{}};
  for (const auto& axis : axes) {
    std::vector<GridPoint> next;
    next.reserve(points.size() * axis.values.size());
    for (const auto& p : points) {
      for (double v : axis.values) {
        GridPoint q = p;
        q.emplace_back(axis.key, v);
        next.push_back(std::move(q));
      }
    }
    points = std::move(next);
  }
  return points;
}

ScenarioConfig apply_point(const ScenarioConfig& base, const GridPoint& point) {
  ScenarioConfig cfg = base;
  for (const auto& [key, value] : point) apply_override(cfg, key, format_double(value));
  return cfg;
}

std::optional<Equilibrium> predicted_equilibrium(const ControllerParams& p, double q_r) {
  const auto eqs = equilibria(p, q_r);
  const Equilibrium* e12 = eqs[0].exists ? &eqs[0] : (eqs[1].exists ? &eqs[1] : nullptr);
  const Equilibrium* e3 = eqs[2].exists ? &eqs[2] : nullptr;
  bool h12 = false;
  bool h3 = false;
  try {
    h12 = e12 && hurwitz_eq1(p, q_r).verdict;
  } catch (const DegenerateParameters&) {
  }
  try {
    h3 = e3 && hurwitz_eq3(p, q_r).verdict;
  } catch (const SingularState&) {
  }
  if (h12) return *e12;
  if (h3) return *e3;
  if (e12) return *e12;
  if (e3) return *e3;
  return std::nullopt;
}

AnalyzeRow analyze_point(const ScenarioConfig& base, const GridPoint& point) {
  AnalyzeRow row;
  row.point = point;
  row.radius.fill(std::numeric_limits<double>::quiet_NaN());
  try {
    const ScenarioConfig cfg = apply_point(base, point);
    const ControllerParams& p = cfg.params;
    const double q_r = field_q_r(cfg.field);
    const AnalysisConstants c = constants(p, q_r);
    row.gamma1 = c.gamma1;
    const auto eqs = equilibria(c);
    for (std::size_t k = 0; k < 4; ++k) {
      row.exists[k] = eqs[k].exists;
      if (eqs[k].exists) row.radius[k] = eqs[k].state.r_tilde;
    }
    const CorollaryGate g = corollary_gate(p, q_r);
    row.corollary1 = g.corollary1;
    row.corollary2 = g.corollary2;
    row.vc_bar = g.vc_bar;
    row.hurwitz_eq1 = hurwitz_eq1(p, q_r).verdict;
    const Eq1Entries m = jacobian_eq1_analytic(p, q_r);
    row.spectrum_eq1 = std::string(to_string(classify(characteristic_eq1(m, p.h).roots())));
    if (eqs[2].exists) row.hurwitz_eq3 = hurwitz_eq3(p, q_r).verdict;
  } catch (const std::exception& e) {
    row.error = sanitize(e.what());
  }
  return row;
}

SimulateRow simulate_point(const ScenarioConfig& base, const GridPoint& point) {
  SimulateRow row;
  row.point = point;
  try {
    const ScenarioConfig cfg = apply_point(base, point);
    const SimConfig sim = cfg.sim();
    const Trajectory traj = run(sim);
    const RunSummary s = summarize(traj, sim);
    row.final_distance = s.final_distance;
    row.mean_r_tilde = s.mean_r_tilde;
    row.mean_alpha = s.mean_alpha;
    row.mean_theta_tilde = s.mean_theta_tilde;
    row.settle_time = s.settle_time;
    if (std::holds_alternative<QuadraticSpherical>(cfg.field)) {
      try {
        if (const auto eq = predicted_equilibrium(cfg.params, field_q_r(cfg.field))) {
          row.predicted_kind = std::string(to_string(eq->kind));
          row.predicted_radius = eq->state.r_tilde;
          row.deviation = std::fabs(s.mean_r_tilde - eq->state.r_tilde);
        }
      } catch (const DegenerateParameters&) {
      }
    }
  } catch (const std::exception& e) {
    row.error = sanitize(e.what());
  }
  return row;
}

std::vector<AnalyzeRow> sweep_analyze(const ScenarioConfig& base, const std::vector<GridPoint>& grid,
                                      Execution exec) {
  return map_grid<AnalyzeRow>(grid, exec, [&](const GridPoint& p) { return analyze_point(base, p); });
}

std::vector<SimulateRow> sweep_simulate(const ScenarioConfig& base, const std::vector<GridPoint>& grid,
                                        Execution exec) {
  return map_grid<SimulateRow>(grid, exec, [&](const GridPoint& p) { return simulate_point(base, p); });
}

std::vector<Trajectory> run_batch(const std::vector<SimConfig>& configs, Execution exec) {
  std::vector<Trajectory> out(configs.size());
  std::vector<std::string> errors(configs.size());
  const auto n = static_cast<long>(configs.size());
  const auto one = [&](long i) {
    const auto k = static_cast<std::size_t>(i);
    try {
      out[k] = run(configs[k]);
    } catch (const std::exception& e) {
      errors[k] = e.what();
    }
  };
  if (exec == Execution::parallel) {
#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < n; ++i) one(i);
  } else {
    for (long i = 0; i < n; ++i) one(i);
  }
  for (std::size_t k = 0; k < errors.size(); ++k) {
    if (!errors[k].empty()) throw std::runtime_error("batch run " + std::to_string(k) + ": " + errors[k]);
  }
  return out;
}

Table to_table(const std::vector<GridAxis>& axes, const std::vector<AnalyzeRow>& rows) {
  Table t;
  for (const auto& a : axes) t.columns.push_back(a.key);
  for (const char* c : {"gamma1", "eq1_exists", "eq2_exists", "eq3_exists", "eq4_exists", "eq1_radius", "eq2_radius",
                        "eq3_radius", "eq4_radius", "hurwitz_eq1", "spectrum_eq1", "hurwitz_eq3", "corollary1",
                        "corollary2", "vc_bar", "error"}) {
    t.columns.emplace_back(c);
  }
  for (const auto& r : rows) {
    std::vector<std::string> line;
    for (const auto& [k, v] : r.point) line.push_back(format_double(v));
    line.push_back(cell(r.gamma1));
    for (bool e : r.exists) line.push_back(cell(e));
    for (double v : r.radius) line.push_back(cell(v));
    line.push_back(cell(r.hurwitz_eq1));
    line.push_back(r.spectrum_eq1);
    line.push_back(cell(r.hurwitz_eq3));
    line.push_back(cell(r.corollary1));
    line.push_back(cell(r.corollary2));
    line.push_back(cell(r.vc_bar));
    line.push_back(r.error);
    t.rows.push_back(std::move(line));
  }
  return t;
}

Table to_table(const std::vector<GridAxis>& axes, const std::vector<SimulateRow>& rows) {
  Table t;
  for (const auto& a : axes) t.columns.push_back(a.key);
  for (const char* c : {"final_distance", "mean_r_tilde", "mean_alpha", "mean_theta_tilde", "settle_time",
                        "predicted_kind", "predicted_radius", "deviation", "error"}) {
    t.columns.emplace_back(c);
  }
  for (const auto& r : rows) {
    std::vector<std::string> line;
    for (const auto& [k, v] : r.point) line.push_back(format_double(v));
    const bool ok = r.error.empty();
    line.push_back(ok ? cell(r.final_distance) : "");
    line.push_back(ok ? cell(r.mean_r_tilde) : "");
    line.push_back(ok ? cell(r.mean_alpha) : "");
    line.push_back(ok ? cell(r.mean_theta_tilde) : "");
    line.push_back(cell(r.settle_time));
    line.push_back(r.predicted_kind);
    line.push_back(cell(r.predicted_radius));
    line.push_back(cell(r.deviation));
    line.push_back(r.error);
    t.rows.push_back(std::move(line));
  }
  return t;
}

void write_table_csv(std::ostream& out, const Table& t) {
  for (std::size_t i = 0; i < t.columns.size(); ++i) out << (i ? "," : "") << t.columns[i];
  out << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
    out << '\n';
  }
}

Table read_table_csv(std::istream& in) {
  Table t;
  std::string line;
  if (!std::getline(in, line)) throw InvalidParameter("empty CSV: missing header");
  t.columns = split_csv_line(line);
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    auto cells = split_csv_line(line);
    if (cells.size() != t.columns.size()) {
      throw InvalidParameter("line " + std::to_string(line_no) + ": expected " + std::to_string(t.columns.size()) +
                             " columns, got " + std::to_string(cells.size()));
    }
    t.rows.push_back(std::move(cells));
  }
  return t;
}

}  // namespace esseek
