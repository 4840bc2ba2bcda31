#include "esseek/fields.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "esseek/errors.hpp"

namespace esseek {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require_finite_positive(double v, const char* name) {
  if (!(std::isfinite(v) && v > 0.0)) {
    throw InvalidParameter(std::string(name) + " must be finite and strictly positive (got " +
                           std::to_string(v) + ")");
  }
}

}  // namespace

double acoustic_intensity(const Acoustic& spec, const Vec3& point) {
  const Vec3 d = point - spec.r_star;
  const double d2 = dot(d, d);
  if (d2 == 0.0) {
    throw FieldDomainError("acoustic field is singular at its source location");
  }
  return 1.0 / (4.0 * std::numbers::pi * d2);
}

double eval_field(const FieldSpec& spec, const Vec3& point) {
  return std::visit(
      overloaded{
          [&](const QuadraticSpherical& f) {
            const Vec3 d = point - f.r_star;
            return f.f_star - f.q_r * dot(d, d);
          },
          [&](const QuadraticElliptical& f) {
            const Vec3 d = point - f.r_star;
            return f.f_star - f.curvature.x * d.x * d.x - f.curvature.y * d.y * d.y -
                   f.curvature.z * d.z * d.z;
          },
          [&](const Acoustic& f) { return -std::exp(-acoustic_intensity(f, point)); },
          [&](const Rosenbrock& f) {
            const Vec3 d = point - f.r_star;
            const double u = d.y - d.x * d.x;
            const double w = d.z - d.y * d.y;
            return -d.x * d.x - u * u - d.y * d.y - w * w;
          },
      },
      spec);
}

const Vec3& source_location(const FieldSpec& spec) {
  return std::visit([](const auto& f) -> const Vec3& { return f.r_star; }, spec);
}

void validate(const FieldSpec& spec) {
  if (!is_finite(source_location(spec))) {
    throw InvalidParameter("field.r_star must be finite");
  }
  std::visit(overloaded{
                 [](const QuadraticSpherical& f) {
                   if (!std::isfinite(f.f_star)) throw InvalidParameter("field.f_star must be finite");
                   require_finite_positive(f.q_r, "field.q_r");
                 },
                 [](const QuadraticElliptical& f) {
                   if (!std::isfinite(f.f_star)) throw InvalidParameter("field.f_star must be finite");
                   require_finite_positive(f.curvature.x, "field.curvature[x]");
                   require_finite_positive(f.curvature.y, "field.curvature[y]");
                   require_finite_positive(f.curvature.z, "field.curvature[z]");
                 },
                 [](const Acoustic&) {},
                 [](const Rosenbrock&) {},
             },
             spec);
}

std::string_view field_kind(const FieldSpec& spec) {
  return std::visit(overloaded{
                        [](const QuadraticSpherical&) { return std::string_view{"quadratic_spherical"}; },
                        [](const QuadraticElliptical&) { return std::string_view{"quadratic_elliptical"}; },
                        [](const Acoustic&) { return std::string_view{"acoustic"}; },
                        [](const Rosenbrock&) { return std::string_view{"rosenbrock"}; },
                    },
                    spec);
}

}  // namespace esseek
