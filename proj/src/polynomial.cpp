#include "esseek/polynomial.hpp"

#include <cmath>
#include <numbers>

namespace esseek {

std::array<Complex, 2> quadratic_roots(double c1, double c0) {
  const double disc = c1 * c1 - 4.0 * c0;
  if (disc >= 0.0) {
    // Avoids cancellation in the smaller root.
    const double q = -0.5 * (c1 + std::copysign(std::sqrt(disc), c1));
    if (q == 0.0) return {Complex{0.0}, Complex{0.0}};
    return {Complex{q}, Complex{c0 / q}};
  }
  const double re = -0.5 * c1;
  const double im = 0.5 * std::sqrt(-disc);
  return {Complex{re, im}, Complex{re, -im}};
}

std::array<Complex, 3> cubic_roots(double c2, double c1, double c0) {
  // Depressed cubic t^3 + p t + q with s = t - c2/3.
  const double shift = c2 / 3.0;
  const double p = c1 - c2 * c2 / 3.0;
  const double q = 2.0 * c2 * c2 * c2 / 27.0 - c2 * c1 / 3.0 + c0;
  std::array<Complex, 3> t;
  const double disc = q * q / 4.0 + p * p * p / 27.0;
  if (p == 0.0 && q == 0.0) {
    t = {Complex{0.0}, Complex{0.0}, Complex{0.0}};
  } else if (disc > 0.0) {
    const double sq = std::sqrt(disc);
    const double u = std::cbrt(-q / 2.0 + sq);
    const double v = std::cbrt(-q / 2.0 - sq);
    const double re = -0.5 * (u + v);
    const double im = 0.5 * std::sqrt(3.0) * (u - v);
    t = {Complex{u + v}, Complex{re, im}, Complex{re, -im}};
  } else {
    // Three real roots (trigonometric form); p < 0 here.
    const double m = 2.0 * std::sqrt(-p / 3.0);
    double arg = 3.0 * q / (p * m);
    arg = std::fmax(-1.0, std::fmin(1.0, arg));
    const double phi = std::acos(arg) / 3.0;
    for (int k = 0; k < 3; ++k) t[k] = Complex{m * std::cos(phi - 2.0 * std::numbers::pi * k / 3.0)};
  }
  const std::array<double, 3> coeffs{c2, c1, c0};
  std::array<Complex, 3> roots;
  for (int k = 0; k < 3; ++k) {
    Complex s = t[k] - shift;
    for (int it = 0; it < 4; ++it) {
      const Complex f = eval_monic(coeffs, s);
      const Complex df = 3.0 * s * s + 2.0 * c2 * s + c1;
      if (std::abs(df) == 0.0) break;
      const Complex next = s - f / df;
      if (!(std::abs(eval_monic(coeffs, next)) < std::abs(f))) break;
      s = next;
    }
    roots[k] = s;
  }
  return roots;
}

}  // namespace esseek
