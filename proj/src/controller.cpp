#include "esseek/controller.hpp"

#include <cmath>
#include <string>

#include "esseek/errors.hpp"

namespace esseek {

void ControllerParams::validate() const {
  const auto check = [](double v, const char* name) {
    if (!(std::isfinite(v) && v > 0.0)) {
      throw InvalidParameter(std::string("controller.") + name +
                             " must be finite and strictly positive (got " + std::to_string(v) + ")");
    }
  };
  check(a, "a");
  check(c_alpha, "c_alpha");
  check(c_theta, "c_theta");
  check(b, "b");
  check(h, "h");
  check(V_c, "V_c");
  check(omega, "omega");
  check(R, "R");
}

double washout_rhs(const WashoutState& ws, double J, double h) { return h * (J - ws.eta); }

double washout_output(const WashoutState& ws, double J) { return J - ws.eta; }

ControlCommand control(double xi, double t, const ControllerParams& p) {
  const double s = std::sin(p.omega * t);
  const double c = std::cos(p.omega * t);
  return {p.V_c + p.b * xi, p.a * p.omega * c + p.c_alpha * xi * s, -p.a * p.omega * s + p.c_theta * xi * c};
}

}  // namespace esseek
