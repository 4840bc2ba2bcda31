#pragma once

#include <array>
#include <complex>

namespace esseek {

using Complex = std::complex<double>;

/// Roots of s^2 + c1 s + c0.
std::array<Complex, 2> quadratic_roots(double c1, double c0);

/// Roots of s^3 + c2 s^2 + c1 s + c0 (closed form, then Newton-polished).
std::array<Complex, 3> cubic_roots(double c2, double c1, double c0);

/// Monic polynomial value, coefficients highest degree first after the implied leading 1.
template <std::size_t N>
Complex eval_monic(const std::array<double, N>& coeffs, Complex s) {
  Complex v{1.0, 0.0};
  for (double c : coeffs) v = v * s + c;
  return v;
}

}  // namespace esseek
