#pragma once

#include <string_view>
#include <variant>

#include "esseek/vec3.hpp"

namespace esseek {

/// J = f* - q_r |p - r*|^2
struct QuadraticSpherical {
  double f_star{1.0};
  double q_r{1.0};
  Vec3 r_star{};
};

/// J = f* - sum_i k_i (p_i - r*_i)^2 with per-axis curvatures k_i > 0.
struct QuadraticElliptical {
  double f_star{1.0};
  Vec3 curvature{2.0, 0.5, 1.0};
  Vec3 r_star{};
};

/// Unit-power acoustic source. The controller sees J' = -exp(-I) where
/// I = 1 / (4 pi |p - r*|^2) is the raw intensity.
struct Acoustic {
  Vec3 r_star{};
};

/// J = -x^2 - (y - x^2)^2 - y^2 - (z - y^2)^2 in coordinates relative to r*.
struct Rosenbrock {
  Vec3 r_star{};
};

using FieldSpec = std::variant<QuadraticSpherical, QuadraticElliptical, Acoustic, Rosenbrock>;

/// Signal strength fed to the controller at `point`.
/// Throws FieldDomainError for Acoustic evaluated exactly at its source.
double eval_field(const FieldSpec& spec, const Vec3& point);

/// Raw inverse-square intensity of an acoustic source (diagnostics only).
double acoustic_intensity(const Acoustic& spec, const Vec3& point);

const Vec3& source_location(const FieldSpec& spec);

/// Throws InvalidParameter if q_r <= 0 or any elliptical curvature <= 0.
void validate(const FieldSpec& spec);

/// Stable config-file name of the variant ("quadratic_spherical", ...).
std::string_view field_kind(const FieldSpec& spec);

}  // namespace esseek
