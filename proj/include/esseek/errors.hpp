#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace esseek {

// A parameter or config value violates its documented invariant.
class InvalidParameter : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Field evaluated at a singular point (acoustic source location).
class FieldDomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// The integrator produced a non-finite state.
class SimulationDiverged : public std::runtime_error {
 public:
  SimulationDiverged(std::size_t step_index, const std::string& what)
      : std::runtime_error(what), step_index_(step_index) {}
  std::size_t step_index() const noexcept { return step_index_; }

 private:
  std::size_t step_index_;
};

// Averaged right-hand side evaluated where it divides by zero
// (r_tilde = 0 or cos(alpha_star) = 0).
class SingularState : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Analysis requested at an equilibrium that does not exist for the parameters.
class EquilibriumMissing : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A closed-form analysis constant divides by a vanishing factor.
// factor() names it, e.g. "rho1" or "J1(sqrt(2) a)".
class DegenerateParameters : public std::domain_error {
 public:
  explicit DegenerateParameters(std::string factor)
      : std::domain_error("degenerate parameters: " + factor + " vanishes"),
        factor_(std::move(factor)) {}
  const std::string& factor() const noexcept { return factor_; }

 private:
  std::string factor_;
};

}  // namespace esseek
