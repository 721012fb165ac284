#pragma once

#include <stdexcept>
#include <string>

namespace fracmc {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  /// Short machine-readable tag, used by the CLI error JSON.
  [[nodiscard]] virtual const char* kind() const noexcept { return "error"; }
  /// True for failures of the numerics rather than of the caller's input.
  [[nodiscard]] virtual bool numerical() const noexcept { return false; }
};

/// Argument outside the documented domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
  [[nodiscard]] const char* kind() const noexcept override { return "domain"; }
};

/// Gamma function evaluated at a non-positive integer.
class PoleError : public DomainError {
 public:
  using DomainError::DomainError;
  [[nodiscard]] const char* kind() const noexcept override { return "pole"; }
};

/// Operation that has no meaning at beta == 1 (the point-mass limit).
class DegenerateOrderError : public DomainError {
 public:
  using DomainError::DomainError;
  [[nodiscard]] const char* kind() const noexcept override { return "degenerate_order"; }
};

/// A series or quadrature could not reach its error bound.
class ConvergenceError : public Error {
 public:
  using Error::Error;
  [[nodiscard]] const char* kind() const noexcept override { return "convergence"; }
  [[nodiscard]] bool numerical() const noexcept override { return true; }
};

class OverflowError : public Error {
 public:
  using Error::Error;
  [[nodiscard]] const char* kind() const noexcept override { return "overflow"; }
  [[nodiscard]] bool numerical() const noexcept override { return true; }
};

/// Step-size underflow or step budget exhausted inside the ODE integrator.
class IntegrationError : public Error {
 public:
  IntegrationError(const std::string& what, double last_good_time)
      : Error(what), last_good_time_(last_good_time) {}
  [[nodiscard]] const char* kind() const noexcept override { return "integration"; }
  [[nodiscard]] bool numerical() const noexcept override { return true; }
  [[nodiscard]] double last_good_time() const noexcept { return last_good_time_; }

 private:
  double last_good_time_;
};

/// Training loss blew up.
class DivergenceError : public Error {
 public:
  using Error::Error;
  [[nodiscard]] const char* kind() const noexcept override { return "divergence"; }
  [[nodiscard]] bool numerical() const noexcept override { return true; }
};

}  // namespace fracmc
