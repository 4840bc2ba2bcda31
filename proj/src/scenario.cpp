#include "esseek/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "esseek/errors.hpp"

namespace esseek {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

Vec3 parse_vec3(std::string_view text, std::string_view key) {
  std::istringstream in{std::string(text)};
  std::vector<std::string> parts;
  for (std::string tok; in >> tok;) parts.push_back(tok);
  if (parts.size() != 3) {
    throw InvalidParameter(std::string(key) + ": expected three space-separated numbers, got '" + std::string(text) +
                           "'");
  }
  return {parse_double(parts[0], key), parse_double(parts[1], key), parse_double(parts[2], key)};
}

std::string format_vec3(const Vec3& v) {
  return format_double(v.x) + " " + format_double(v.y) + " " + format_double(v.z);
}

std::size_t parse_size(std::string_view text, std::string_view key) {
  const std::string t = trim(text);
  std::size_t v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) {
    throw InvalidParameter(std::string(key) + ": expected a non-negative integer, got '" + t + "'");
  }
  return v;
}

FieldSpec field_of_kind(std::string_view kind, const Vec3& r_star) {
  if (kind == "quadratic_spherical") return QuadraticSpherical{1.0, 1.0, r_star};
  if (kind == "quadratic_elliptical") return QuadraticElliptical{1.0, {2.0, 0.5, 1.0}, r_star};
  if (kind == "acoustic") return Acoustic{r_star};
  if (kind == "rosenbrock") return Rosenbrock{r_star};
  throw InvalidParameter("field.kind: unknown kind '" + std::string(kind) +
                         "' (expected quadratic_spherical, quadratic_elliptical, acoustic or rosenbrock)");
}

[[noreturn]] void not_applicable(std::string_view key, const FieldSpec& f) {
  throw InvalidParameter(std::string(key) + " does not apply to field kind " + std::string(field_kind(f)));
}

void set_field_key(ScenarioConfig& cfg, std::string_view key, std::string_view full, std::string_view value) {
  if (key == "kind") {
    cfg.field = field_of_kind(trim(value), source_location(cfg.field));
  } else if (key == "r_star") {
    const Vec3 r = parse_vec3(value, full);
    std::visit([&](auto& f) { f.r_star = r; }, cfg.field);
  } else if (key == "f_star") {
    const double v = parse_double(value, full);
    if (auto* s = std::get_if<QuadraticSpherical>(&cfg.field)) {
      s->f_star = v;
    } else if (auto* e = std::get_if<QuadraticElliptical>(&cfg.field)) {
      e->f_star = v;
    } else {
      not_applicable(full, cfg.field);
    }
  } else if (key == "q_r") {
    auto* s = std::get_if<QuadraticSpherical>(&cfg.field);
    if (!s) not_applicable(full, cfg.field);
    s->q_r = parse_double(value, full);
  } else if (key == "curvature") {
    auto* e = std::get_if<QuadraticElliptical>(&cfg.field);
    if (!e) not_applicable(full, cfg.field);
    e->curvature = parse_vec3(value, full);
  } else {
    throw InvalidParameter("unknown config key " + std::string(full));
  }
}

double* controller_slot(ControllerParams& p, std::string_view key) {
  if (key == "a") return &p.a;
  if (key == "c_alpha") return &p.c_alpha;
  if (key == "c_theta") return &p.c_theta;
  if (key == "b") return &p.b;
  if (key == "h") return &p.h;
  if (key == "V_c") return &p.V_c;
  if (key == "omega") return &p.omega;
  if (key == "R") return &p.R;
  return nullptr;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ec == std::errc() ? ptr : buf);
}

double parse_double(std::string_view text, std::string_view key) {
  const std::string t = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) {
    throw InvalidParameter(std::string(key) + ": expected a number, got '" + t + "'");
  }
  return v;
}

double field_q_r(const FieldSpec& field) {
  if (const auto* s = std::get_if<QuadraticSpherical>(&field)) return s->q_r;
  return 1.0;
}

double ScenarioConfig::resolved_dt() const { return dt.value_or(SimConfig::default_dt(params.omega)); }

SimConfig ScenarioConfig::sim() const { return {params, field, initial, resolved_dt(), t_end, record_stride}; }

void ScenarioConfig::validate() const { sim().validate(); }

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names{"corollary1", "corollary2", "proposition2",
                                              "elliptical", "acoustic",   "rosenbrock"};
  return names;
}

ScenarioConfig preset(std::string_view name) {
  ScenarioConfig c;
  c.name = std::string(name);
  c.preset = std::string(name);
  c.params = ControllerParams{};  // a = 2, c = 100, b = 5, h = 10, V_c = 0.001, omega = 40, R = 0.1
  c.initial = {{1.0, 1.0, 1.0}, -std::numbers::pi / 2.0, -std::numbers::pi / 2.0};
  c.t_end = 60.0;
  c.outputs = "out/" + std::string(name);
  if (name == "corollary1") {
    c.field = QuadraticSpherical{};
  } else if (name == "corollary2") {
    c.params.a = 1.5;
    c.field = QuadraticSpherical{};
  } else if (name == "proposition2") {
    c.params.a = 1.5;
    c.params.V_c = 0.1;
    c.field = QuadraticSpherical{};
  } else if (name == "elliptical") {
    c.field = QuadraticElliptical{};
  } else if (name == "acoustic") {
    c.field = Acoustic{};
  } else if (name == "rosenbrock") {
    c.field = Rosenbrock{};
  } else {
    throw InvalidParameter("unknown preset '" + std::string(name) +
                           "' (expected corollary1, corollary2, proposition2, elliptical, acoustic or rosenbrock)");
  }
  return c;
}

void apply_override(ScenarioConfig& cfg, std::string_view key, std::string_view value) {
  std::string section = "controller";
  std::string name(key);
  if (const auto dot = key.find('.'); dot != std::string_view::npos) {
    section = std::string(key.substr(0, dot));
    name = std::string(key.substr(dot + 1));
  }
  const std::string full = section + "." + name;
  if (section == "scenario") {
    if (name == "name") {
      cfg.name = trim(value);
    } else if (name == "preset") {
      cfg = preset(trim(value));
    } else if (name == "dt") {
      if (trim(value) == "auto") {
        cfg.dt.reset();
      } else {
        cfg.dt = parse_double(value, full);
      }
    } else if (name == "t_end") {
      cfg.t_end = parse_double(value, full);
    } else if (name == "outputs") {
      cfg.outputs = trim(value);
    } else if (name == "record_stride") {
      cfg.record_stride = parse_size(value, full);
    } else {
      throw InvalidParameter("unknown config key " + full);
    }
  } else if (section == "controller") {
    double* slot = controller_slot(cfg.params, name);
    if (!slot) throw InvalidParameter("unknown config key " + full);
    *slot = parse_double(value, full);
  } else if (section == "field") {
    set_field_key(cfg, name, full, value);
  } else if (section == "initial") {
    if (name == "r_c") {
      cfg.initial.r_c = parse_vec3(value, full);
    } else if (name == "alpha") {
      cfg.initial.alpha = parse_double(value, full);
    } else if (name == "theta") {
      cfg.initial.theta = parse_double(value, full);
    } else {
      throw InvalidParameter("unknown config key " + full);
    }
  } else {
    throw InvalidParameter("unknown config section [" + section + "]");
  }
}

void apply_assignment(ScenarioConfig& cfg, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos) {
    throw InvalidParameter("expected section.key=value, got '" + std::string(assignment) + "'");
  }
  apply_override(cfg, trim(assignment.substr(0, eq)), assignment.substr(eq + 1));
}

ScenarioConfig parse_config(const std::string& text) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw InvalidParameter("config parse error: " + e.message() + " (line " + std::to_string(e.line()) + ")");
  }
  static const std::vector<std::string> sections{"scenario", "controller", "field", "initial"};
  for (const auto& [section, child] : tree) {
    if (std::find(sections.begin(), sections.end(), section) == sections.end()) {
      throw InvalidParameter("unknown config section [" + section + "]");
    }
    if (child.empty() && !child.data().empty()) {
      throw InvalidParameter("config key '" + section + "' must be inside a section");
    }
  }

  ScenarioConfig cfg;
  // Keys that replace whole sub-objects go first, so ordering within a file does not matter.
  if (const auto p = tree.get_optional<std::string>("scenario.preset")) apply_override(cfg, "scenario.preset", *p);
  if (const auto k = tree.get_optional<std::string>("field.kind")) apply_override(cfg, "field.kind", *k);
  for (const auto& section : sections) {
    const auto child = tree.get_child_optional(section);
    if (!child) continue;
    for (const auto& [key, node] : *child) {
      if ((section == "scenario" && key == "preset") || (section == "field" && key == "kind")) continue;
      apply_override(cfg, section + "." + key, node.data());
    }
  }
  return cfg;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidParameter("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string serialize(const ScenarioConfig& cfg) {
  std::ostringstream o;
  o << "[scenario]\n";
  o << "name = " << cfg.name << "\n";
  if (cfg.preset) o << "preset = " << *cfg.preset << "\n";
  o << "dt = " << (cfg.dt ? format_double(*cfg.dt) : std::string("auto")) << "\n";
  o << "; resolved dt = " << format_double(cfg.resolved_dt()) << "\n";
  o << "t_end = " << format_double(cfg.t_end) << "\n";
  o << "record_stride = " << cfg.record_stride << "\n";
  o << "outputs = " << cfg.outputs << "\n\n";

  const ControllerParams& p = cfg.params;
  o << "[controller]\n";
  o << "a = " << format_double(p.a) << "\n";
  o << "c_alpha = " << format_double(p.c_alpha) << "\n";
  o << "c_theta = " << format_double(p.c_theta) << "\n";
  o << "b = " << format_double(p.b) << "\n";
  o << "h = " << format_double(p.h) << "\n";
  o << "V_c = " << format_double(p.V_c) << "\n";
  o << "omega = " << format_double(p.omega) << "\n";
  o << "R = " << format_double(p.R) << "\n\n";

  o << "[field]\n";
  o << "kind = " << field_kind(cfg.field) << "\n";
  if (const auto* s = std::get_if<QuadraticSpherical>(&cfg.field)) {
    o << "f_star = " << format_double(s->f_star) << "\n";
    o << "q_r = " << format_double(s->q_r) << "\n";
  } else if (const auto* e = std::get_if<QuadraticElliptical>(&cfg.field)) {
    o << "f_star = " << format_double(e->f_star) << "\n";
    o << "curvature = " << format_vec3(e->curvature) << "\n";
  }
  o << "r_star = " << format_vec3(source_location(cfg.field)) << "\n\n";

  o << "[initial]\n";
  o << "r_c = " << format_vec3(cfg.initial.r_c) << "\n";
  o << "alpha = " << format_double(cfg.initial.alpha) << "\n";
  o << "theta = " << format_double(cfg.initial.theta) << "\n";
  return o.str();
}

}  // namespace esseek
