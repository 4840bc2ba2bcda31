#include "esseek/report.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include "esseek/errors.hpp"

namespace esseek {

namespace {

using nlohmann::json;

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::vector<double> parse_row(const std::string& line, std::size_t expected, std::size_t line_no) {
  const auto cells = split_csv_line(line);
  if (cells.size() != expected) {
    throw InvalidParameter("line " + std::to_string(line_no) + ": expected " + std::to_string(expected) +
                           " columns, got " + std::to_string(cells.size()));
  }
  std::vector<double> v;
  v.reserve(expected);
  for (const auto& c : cells) v.push_back(parse_double(c, "line " + std::to_string(line_no)));
  return v;
}

void expect_header(std::istream& in, const char* header) {
  std::string line;
  if (!std::getline(in, line)) throw InvalidParameter("empty CSV: missing header");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != header) throw InvalidParameter("CSV header mismatch: expected '" + std::string(header) + "'");
}

json eq1_entries_json(const Eq1Entries& m) {
  return {{"m11", m.m11}, {"m15", m.m15}, {"m22", m.m22}, {"m23", m.m23},
          {"m32", m.m32}, {"m33", m.m33}, {"m44", m.m44}, {"m51", m.m51}};
}

}  // namespace

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur.push_back(ch);
    }
  }
  out.push_back(cur);
  return out;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
  out << kTrajectoryHeader << '\n';
  for (const auto& r : traj) {
    out << format_double(r.t) << ',' << format_double(r.r_c.x) << ',' << format_double(r.r_c.y) << ','
        << format_double(r.r_c.z) << ',' << format_double(r.alpha) << ',' << format_double(r.theta) << ','
        << format_double(r.J) << ',' << format_double(r.xi) << ',' << format_double(r.v) << ','
        << format_double(r.psi_alpha) << ',' << format_double(r.psi_theta) << '\n';
  }
}

Trajectory read_trajectory_csv(std::istream& in) {
  expect_header(in, kTrajectoryHeader);
  Trajectory traj;
  std::string line;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto v = parse_row(line, 11, line_no);
    traj.push_back({v[0], {v[1], v[2], v[3]}, v[4], v[5], v[6], v[7], v[8], v[9], v[10]});
  }
  return traj;
}

void write_averaged_csv(std::ostream& out, const std::vector<AveragedRow>& rows, double omega) {
  out << kAveragedHeader << '\n';
  for (const auto& r : rows) {
    const auto& s = r.state;
    out << format_double(r.tau) << ',' << format_double(r.tau / omega) << ',' << format_double(s.r_tilde) << ','
        << format_double(s.alpha_star) << ',' << format_double(s.alpha_hat) << ',' << format_double(s.theta_tilde)
        << ',' << format_double(s.e_hat) << '\n';
  }
}

std::vector<AveragedRow> read_averaged_csv(std::istream& in) {
  expect_header(in, kAveragedHeader);
  std::vector<AveragedRow> rows;
  std::string line;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto v = parse_row(line, 7, line_no);
    rows.push_back({v[0], {v[2], v[3], v[4], v[5], v[6]}});
  }
  return rows;
}

std::vector<AveragedRow> run_averaged(const AveragedState& start, const ControllerParams& p, double q_r,
                                      double tau_end, double dtau) {
  if (!(std::isfinite(dtau) && dtau > 0.0)) throw InvalidParameter("dtau must be finite and strictly positive");
  if (!(std::isfinite(tau_end) && tau_end >= 0.0)) throw InvalidParameter("tau_end must be finite and non-negative");
  averaged_rhs(start, p, q_r);  // surfaces a singular start before any output
  const auto n = static_cast<std::size_t>(std::floor(tau_end / dtau + 1e-9));
  std::vector<AveragedRow> rows;
  rows.reserve(n + 1);
  rows.push_back({0.0, start});
  AveragedState s = start;
  for (std::size_t i = 0; i < n; ++i) {
    s = averaged_step(s, dtau, p, q_r);
    rows.push_back({static_cast<double>(i + 1) * dtau, s});
  }
  return rows;
}

json to_json(const Vec3& v) { return json::array({v.x, v.y, v.z}); }

json to_json(const AveragedState& s) {
  return {{"r_tilde", number_or_null(s.r_tilde)},
          {"alpha_star", number_or_null(s.alpha_star)},
          {"alpha_hat", number_or_null(s.alpha_hat)},
          {"theta_tilde", number_or_null(s.theta_tilde)},
          {"e_hat", number_or_null(s.e_hat)}};
}

json to_json(const Matrix5& m) {
  json rows = json::array();
  for (const auto& r : m) rows.push_back(json::array({r[0], r[1], r[2], r[3], r[4]}));
  return rows;
}

json to_json(const std::array<Complex, 5>& roots) {
  json out = json::array();
  for (const auto& z : roots) out.push_back({{"re", z.real()}, {"im", z.imag()}});
  return out;
}

json summary_json(const RunSummary& s, const ScenarioConfig& cfg) {
  json j;
  j["name"] = cfg.name;
  j["preset"] = cfg.preset ? json(*cfg.preset) : json(nullptr);
  j["field"] = std::string(field_kind(cfg.field));
  j["omega"] = cfg.params.omega;
  j["R"] = cfg.params.R;
  j["dt"] = cfg.resolved_dt();
  j["t_end"] = cfg.t_end;
  j["final_distance"] = s.final_distance;
  j["periods"] = s.periods;
  j["mean_r_tilde"] = s.mean_r_tilde;
  j["mean_alpha"] = s.mean_alpha;
  j["mean_abs_alpha"] = std::fabs(s.mean_alpha);
  j["max_abs_period_alpha"] = s.max_abs_period_alpha;
  j["mean_theta_tilde"] = s.mean_theta_tilde;
  j["settle_time"] = s.settle_time ? json(*s.settle_time) : json(nullptr);
  return j;
}

json analysis_json(const ControllerParams& p, double q_r) {
  const AnalysisConstants c = constants(p, q_r);
  json j;
  j["params"] = {{"a", p.a},   {"c_alpha", p.c_alpha}, {"c_theta", p.c_theta}, {"b", p.b}, {"h", p.h},
                 {"V_c", p.V_c}, {"omega", p.omega},   {"R", p.R},             {"q_r", q_r}};
  j["constants"] = {{"J0_sqrt2a", c.j0_s2a}, {"J1_sqrt2a", c.j1_s2a}, {"rho1", c.rho1},
                    {"rho2", c.rho2},        {"gamma1", c.gamma1},    {"gamma2", c.gamma2},
                    {"gamma3", c.gamma3},    {"mu0", c.mu0 ? json(*c.mu0) : json(nullptr)},
                    {"e1", c.e1},            {"e2", c.e2},            {"phi1", c.phi1},
                    {"phi2", c.phi2},        {"phi3", number_or_null(c.phi3)},
                    {"phi4", c.phi4}};
  json eqs = json::array();
  for (const auto& e : equilibria(c)) {
    json item{{"kind", std::string(to_string(e.kind))}, {"exists", e.exists}, {"state", to_json(e.state)}};
    item["residual"] = e.exists ? json(residual(e.state, p, q_r)) : json(nullptr);
    eqs.push_back(item);
  }
  j["equilibria"] = eqs;
  return j;
}

json stability_json(const ControllerParams& p, double q_r) {
  json j;
  const Eq1Hurwitz h1 = hurwitz_eq1(p, q_r);
  const Eq1Entries m = jacobian_eq1_analytic(p, q_r);
  const CharacteristicEq1 ch = characteristic_eq1(m, p.h);
  j["hurwitz_eq1"] = {{"raw", h1.raw}, {"explicit", h1.explicit_}, {"verdict", h1.verdict}};
  j["characteristic_eq1"] = {{"quad1", ch.quad1}, {"m44", ch.m44}, {"quad2", ch.quad2}, {"expanded", ch.expanded()}};

  json reports = json::array();
  bool eq3_exists = false;
  for (const auto& e : equilibria(p, q_r)) {
    json item{{"kind", std::string(to_string(e.kind))}, {"exists", e.exists}};
    if (e.exists) {
      if (e.kind == EquilibriumKind::eq3) eq3_exists = true;
      const JacobianReport r = jacobian_report(e, p, q_r);
      item["jacobian"] = to_json(r.entries);
      item["analytic_entries"] = r.analytic ? eq1_entries_json(*r.analytic) : json(nullptr);
      item["eigenvalues"] = to_json(r.eigenvalues);
      item["margin"] = r.margin;
      item["spectrum"] = std::string(to_string(r.spectrum));
      item["hurwitz"] = r.hurwitz;
    }
    reports.push_back(item);
  }
  j["equilibria"] = reports;

  if (eq3_exists) {
    const Eq3Hurwitz h3 = hurwitz_eq3(p, q_r);
    j["hurwitz_eq3"] = {{"conditions", h3.conditions}, {"k1", h3.k1}, {"k2", h3.k2}, {"k3", h3.k3},
                        {"verdict", h3.verdict}};
  } else {
    j["hurwitz_eq3"] = nullptr;
  }

  const CorollaryGate g = corollary_gate(p, q_r);
  j["corollary_gate"] = {{"corollary1", g.corollary1},
                         {"corollary2", g.corollary2},
                         {"vc_bar", g.vc_bar ? json(*g.vc_bar) : json(nullptr)}};
  return j;
}

json read_json(std::istream& in) {
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InvalidParameter(std::string("JSON parse error: ") + e.what());
  }
}

void write_file(const std::string& path, const std::string& text) {
  const std::filesystem::path fp(path);
  if (fp.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(fp.parent_path(), ec);
    if (ec) throw InvalidParameter("cannot create directory '" + fp.parent_path().string() + "': " + ec.message());
  }
  std::ofstream out(fp, std::ios::binary);
  if (!out) throw InvalidParameter("cannot write '" + path + "'");
  out << text;
  if (!out) throw InvalidParameter("write failed for '" + path + "'");
}

}  // namespace esseek
