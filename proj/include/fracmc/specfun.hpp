#pragma once

// Special functions behind the Wright-type transform: Gamma, the
// two-parameter Mittag-Leffler function E_{beta,alpha}, the Wright function
// W_{lambda,mu}, the density g_beta(x;t) of the inverse stable time, and the
// Taylor-coefficient form of f_beta.
//
// All functions are pure and thread-safe.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace fracmc {

/// Fractional order beta in (0, 1]. beta == 1 is the degenerate point-mass case.
class FracOrder {
 public:
  explicit FracOrder(double beta);

  [[nodiscard]] double value() const noexcept { return beta_; }
  [[nodiscard]] bool degenerate() const noexcept { return beta_ == 1.0; }

  friend bool operator==(const FracOrder&, const FracOrder&) = default;

 private:
  double beta_;
};

/// Parameters (beta, alpha) of E_{beta,alpha}; both strictly positive.
class MlParams {
 public:
  MlParams(double beta, double alpha);

  [[nodiscard]] double beta() const noexcept { return beta_; }
  [[nodiscard]] double alpha() const noexcept { return alpha_; }

 private:
  double beta_;
  double alpha_;
};

/// Taylor coefficients of f at 0: coeffs[n] = f^{(n)}(0) (derivatives, not
/// divided by n!).
class TaylorSeries {
 public:
  explicit TaylorSeries(std::vector<double> coeffs);

  [[nodiscard]] std::span<const double> coeffs() const noexcept { return coeffs_; }
  [[nodiscard]] std::size_t truncation_order() const noexcept {
    return coeffs_.empty() ? 0 : coeffs_.size() - 1;
  }

 private:
  std::vector<double> coeffs_;
};

/// Gamma function (Lanczos, g = 7, reflection below 0.5). Throws PoleError at
/// non-positive integers; returns +inf past the double range.
[[nodiscard]] double gamma(double x);

/// log|Gamma(x)|.
[[nodiscard]] double log_gamma(double x);

/// 1/Gamma(x), exactly 0 at the poles.
[[nodiscard]] double rgamma(double x);

/// E_{beta,alpha}(z) = sum_k z^k / Gamma(beta k + alpha).
///
/// Real arguments go through three regimes, each with its own error
/// estimate; the first that meets a relative bound of 1e-11 wins:
///  1. direct summation in extended precision (at most 500 terms), accepted
///     while the estimated cancellation error stays below the bound;
///  2. for large |z| on the real axis with beta < 2, the asymptotic expansion
///     -sum_{k>=1} z^{-k}/Gamma(alpha - beta k), plus the dominant exponential
///     (1/beta) z^{(1-alpha)/beta} exp(z^{1/beta}) on the positive axis and the
///     decaying conjugate pair when 1 < beta < 2 on the negative axis;
///  3. for negative z with beta < 2, the Hankel-contour integral of the
///     Laplace transform s^{beta-alpha}/(s^beta - z) evaluated by
///     double-exponential quadrature (Beta-integral form when beta == 1).
/// Throws ConvergenceError if none of them reaches the bound.
[[nodiscard]] double mittag_leffler(const MlParams& p, double z);

/// Complex argument: series only. Large |z| where the series cancels raises
/// ConvergenceError.
[[nodiscard]] std::complex<double> mittag_leffler(const MlParams& p, std::complex<double> z);

/// d/dr E_{beta,alpha}(r tau) = sum_{n>=1} n r^{n-1} tau^n / Gamma(n beta + alpha),
/// with tau = t^beta.
[[nodiscard]] double ml_partial_r(const MlParams& p, double r, double t_pow_beta);

/// Wright function W_{lambda,mu}(z) = sum_k z^k / (k! Gamma(lambda k + mu)),
/// lambda > -1. Terms at Gamma poles contribute exactly zero.
[[nodiscard]] double wright(double lambda, double mu, double z);

/// Density g_beta(x;t) = t^{-beta} W_{-beta,1-beta}(-x/t^beta) of T_beta(t).
///
/// The Wright series is used while its cancellation error estimate stays
/// small; further out in the tail the density is computed from the
/// positive-integrand representation
///   g = t^{-beta} p y^{p-1} int_0^1 a(u) exp(-a(u) y^p) du,
/// y = x/t^beta, p = 1/(1-beta), with Kanter's function a(u).
[[nodiscard]] double g_density(FracOrder beta, double x, double t);

/// Truncated transform sum_{n<=N} f^{(n)}(0) t^{n beta}/Gamma(n beta + 1).
[[nodiscard]] double transform_series(const TaylorSeries& f, FracOrder beta, double t);

/// log of Kanter's function
///   a(u) = sin((1-b)pi u) sin(b pi u)^{b/(1-b)} / sin(pi u)^{1/(1-b)},  0 < u < 1.
/// `uc` is 1 - u, passed separately to keep precision near u = 1.
[[nodiscard]] double kanter_log_a(double beta, double u, double uc);

}  // namespace fracmc
