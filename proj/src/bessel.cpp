#include "esseek/bessel.hpp"

#include <cmath>
#include <numbers>

namespace esseek::bessel {

namespace {

constexpr double kSeriesLimit = 18.0;
constexpr int kMinTerms = 25;
constexpr int kMaxTerms = 300;

// sum_k (-1)^k (x^2/4)^k / (k! (k+n)!) for n in {0, 1}
long double series(long double x, int n) {
  const long double q = -0.25L * x * x;
  long double term = 1.0L;  // k = 0 term for both orders
  long double sum = term;
  for (int k = 1; k < kMaxTerms; ++k) {
    term *= q / (static_cast<long double>(k) * static_cast<long double>(k + n));
    sum += term;
    if (k >= kMinTerms && std::fabs(term) < 1e-24L * std::fabs(sum)) break;
  }
  return sum;
}

// Hankel expansion, J_n(x) = sqrt(2/(pi x)) (P cos chi - Q sin chi), x > 0.
double asymptotic(double x, int n) {
  const double mu = 4.0 * n * n;
  const double chi = x - (0.5 * n + 0.25) * std::numbers::pi;
  double p = 1.0;
  double q = 0.0;
  double term = 1.0;
  double last = 1.0;
  for (int k = 1; k < 60; ++k) {
    const double odd = 2.0 * k - 1.0;
    term *= (mu - odd * odd) / (k * 8.0 * x);
    if (std::fabs(term) > std::fabs(last)) break;  // asymptotic series started diverging
    last = term;
    // a_k / x^k with the alternating sign pattern of P (even k) and Q (odd k).
    const int m = k / 2;
    const double signed_term = (m % 2 == 0) ? term : -term;
    if (k % 2 == 0) {
      p += signed_term;
    } else {
      q += signed_term;
    }
    if (std::fabs(term) < 1e-17) break;
  }
  return std::sqrt(2.0 / (std::numbers::pi * x)) * (p * std::cos(chi) - q * std::sin(chi));
}

}  // namespace

double j0(double x) {
  const double ax = std::fabs(x);
  if (ax <= kSeriesLimit) return static_cast<double>(series(ax, 0));
  return asymptotic(ax, 0);
}

double j1(double x) {
  const double ax = std::fabs(x);
  const double v = ax <= kSeriesLimit ? static_cast<double>(0.5L * ax * series(ax, 1)) : asymptotic(ax, 1);
  return x < 0.0 ? -v : v;
}

}  // namespace esseek::bessel
