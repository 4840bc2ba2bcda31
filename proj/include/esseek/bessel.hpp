#pragma once

namespace esseek::bessel {

// Bessel functions of the first kind, orders 0 and 1.
// Power series (extended precision) for |x| <= 18, Hankel asymptotic
// expansion beyond. Absolute error below 1e-12 for |x| <= 50.
double j0(double x);
double j1(double x);

}  // namespace esseek::bessel
