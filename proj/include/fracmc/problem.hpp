#pragma once

// Linear constant-coefficient problems
//   sum_{k=1}^{n} a_k (D^beta)^k y + a_{n+1} y = F_beta
// and their integer-order counterparts
//   sum_{k=1}^{n} a_k z^{(k)} + a_{n+1} z = F,
// which share initial data z(0), z'(0), ..., z^{(n-1)}(0).

#include <cstddef>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "fracmc/odeint.hpp"
#include "fracmc/specfun.hpp"

namespace fracmc {

using ParamMap = std::map<std::string, double>;

/// ODE-side forcing F(t) = amplitude * shape(rate * t).
struct Forcing {
  enum class Kind { None, Constant, Exp, Power, Sin, Cos };

  Kind kind = Kind::None;
  double amplitude = 1.0;
  double rate = 1.0;  // exp(rate t), sin(rate t), cos(rate t); the exponent for Power

  [[nodiscard]] double operator()(double t) const;
  /// F(t), e.g. "exp(-1*t)".
  [[nodiscard]] std::string describe() const;
  /// The transformed forcing F_beta acting on the fractional equation.
  [[nodiscard]] std::string describe_transformed() const;
};

struct LinearFdeProblem {
  /// a_1 .. a_{n+1}; a_k multiplies the k-th derivative, the last entry multiplies y.
  std::vector<double> coefficients;
  Forcing forcing;
  /// z(0), z'(0), ..., z^{(n-1)}(0).
  std::vector<double> initial_conditions;
  FracOrder beta{1.0};
  /// Analytic y_beta(t), when known.
  std::function<double(double)> closed_form;
  std::string label = "custom";

  [[nodiscard]] std::size_t order() const noexcept {
    return coefficients.empty() ? 0 : coefficients.size() - 1;
  }
  /// Throws DomainError on inconsistent sizes, zero leading coefficient or non-finite data.
  void validate() const;
  /// First-order system for (z, z', ..., z^{(n-1)}), starting at t0 = 0.
  [[nodiscard]] OdeSystem ode_system() const;
};

}  // namespace fracmc
