#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "esseek/simulator.hpp"

namespace esseek {

/// A complete run description as read from a config file or expanded from a preset.
struct ScenarioConfig {
  std::string name{"custom"};
  std::optional<std::string> preset;
  ControllerParams params{};
  FieldSpec field{QuadraticSpherical{}};
  VehicleState initial{};
  std::optional<double> dt;  // unset: SimConfig::default_dt(params.omega)
  double t_end{60.0};
  std::string outputs{"out"};
  std::size_t record_stride{1};

  double resolved_dt() const;
  SimConfig sim() const;
  /// Throws InvalidParameter (message names the offending key).
  void validate() const;
};

const std::vector<std::string>& preset_names();

/// Throws InvalidParameter for unknown names.
ScenarioConfig preset(std::string_view name);

/// INI text with sections [scenario], [controller], [field], [initial].
/// A [scenario] preset key seeds every value, other keys override it.
/// Vectors are written as three space-separated numbers.
ScenarioConfig parse_config(const std::string& text);
ScenarioConfig load_config(const std::string& path);

/// Sets one value by "section.key"; bare controller keys ("a", "omega") are accepted too.
void apply_override(ScenarioConfig& cfg, std::string_view key, std::string_view value);

/// "section.key=value"
void apply_assignment(ScenarioConfig& cfg, std::string_view assignment);

/// Deterministic INI rendering; parse_config(serialize(c)) reproduces c exactly.
std::string serialize(const ScenarioConfig& cfg);

/// Shortest decimal that round-trips to the same double.
std::string format_double(double v);

/// Strict full-string number parse; throws InvalidParameter naming `key`.
double parse_double(std::string_view text, std::string_view key);

/// q_r of a quadratic spherical field, 1 for any other field.
double field_q_r(const FieldSpec& field);

}  // namespace esseek
