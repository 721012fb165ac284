#include "fracmc/problem.hpp"

#include <charconv>
#include <cmath>

#include "fracmc/errors.hpp"

namespace fracmc {
namespace {

std::string num(double v) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return {buf, r.ptr};
}

}  // namespace

double Forcing::operator()(double t) const {
  switch (kind) {
    case Kind::None: return 0.0;
    case Kind::Constant: return amplitude;
    case Kind::Exp: return amplitude * std::exp(rate * t);
    case Kind::Power: return amplitude * std::pow(t, rate);
    case Kind::Sin: return amplitude * std::sin(rate * t);
    case Kind::Cos: return amplitude * std::cos(rate * t);
  }
  return 0.0;
}

std::string Forcing::describe() const {
  const std::string a = num(amplitude);
  const std::string r = num(rate);
  switch (kind) {
    case Kind::None: return "0";
    case Kind::Constant: return a;
    case Kind::Exp: return a + "*exp(" + r + "*t)";
    case Kind::Power: return a + "*t^" + r;
    case Kind::Sin: return a + "*sin(" + r + "*t)";
    case Kind::Cos: return a + "*cos(" + r + "*t)";
  }
  return "?";
}

std::string Forcing::describe_transformed() const {
  const std::string a = num(amplitude);
  const std::string r = num(rate);
  const std::string r2 = num(rate * rate);
  switch (kind) {
    case Kind::None: return "0";
    case Kind::Constant: return a;
    case Kind::Exp: return a + "*E_beta(" + r + "*t^beta)";
    case Kind::Power: return a + "*Gamma(" + num(rate + 1) + ")*t^(" + r + "*beta)/Gamma(" + r + "*beta+1)";
    case Kind::Sin: return a + "*" + r + "*t^beta*E_{2beta,beta+1}(-" + r2 + "*t^(2beta))";
    case Kind::Cos: return a + "*E_{2beta}(-" + r2 + "*t^(2beta))";
  }
  return "?";
}

void LinearFdeProblem::validate() const {
  if (coefficients.size() < 2) throw DomainError("problem: need coefficients a_1..a_{n+1} with n >= 1");
  for (double c : coefficients)
    if (!std::isfinite(c)) throw DomainError("problem: coefficients must be finite");
  if (coefficients[order() - 1] == 0.0) throw DomainError("problem: leading coefficient a_n must be nonzero");
  if (initial_conditions.size() != order())
    throw DomainError("problem: expected " + std::to_string(order()) + " initial conditions, got " +
                      std::to_string(initial_conditions.size()));
  for (double c : initial_conditions)
    if (!std::isfinite(c)) throw DomainError("problem: initial conditions must be finite");
  if (!std::isfinite(forcing.amplitude) || !std::isfinite(forcing.rate))
    throw DomainError("problem: forcing parameters must be finite");
}

OdeSystem LinearFdeProblem::ode_system() const {
  validate();
  const std::size_t n = order();
  OdeSystem sys;
  sys.dimension = n;
  sys.initial_state = initial_conditions;
  sys.t0 = 0.0;
  sys.rhs = [a = coefficients, f = forcing, n](double t, std::span<const double> y, std::span<double> d) {
    for (std::size_t i = 0; i + 1 < n; ++i) d[i] = y[i + 1];
    // a_n z^{(n)} = F - a_{n+1} z - sum_{k<n} a_k z^{(k)}
    double acc = f(t) - a[n] * y[0];
    for (std::size_t k = 1; k < n; ++k) acc -= a[k - 1] * y[k];
    d[n - 1] = acc / a[n - 1];
  };
  return sys;
}

}  // namespace fracmc
