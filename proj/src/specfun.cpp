#include "fracmc/specfun.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "fracmc/errors.hpp"

namespace fracmc {
namespace {

using ld = long double;
using cld = std::complex<long double>;

constexpr double kPi = std::numbers::pi;
constexpr ld kPiL = std::numbers::pi_v<long double>;
constexpr ld kEpsL = std::numeric_limits<long double>::epsilon();
constexpr double kInf = std::numeric_limits<double>::infinity();

// Relative error bound every Mittag-Leffler regime has to certify.
constexpr double kMlTol = 1e-11;
constexpr int kMlSeriesCap = 500;

// Lanczos approximation, g = 7, n = 9.
constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczos{
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

bool is_nonpositive_integer(double x) { return x <= 0.0 && x == std::floor(x); }

// sin(pi x), exact zero at integers.
template <class T>
T sinpi(T x) {
  T r = x - 2 * std::round(x / 2);
  if (r == 0 || std::fabs(r) == 1) return T(0);
  const T sign = r < 0 ? T(-1) : T(1);
  r = std::fabs(r);
  if (r > T(0.5)) r = 1 - r;
  return sign * std::sin(std::numbers::pi_v<T> * r);
}

// cos(pi x), exact zero at half-integers.
template <class T>
T cospi(T x) {
  return sinpi(x + T(0.5));
}

// Boost's two-argument tanh_sinh callback on [0, 1] passes (u, -u) on the left
// half and (u, 1 - u) on the right half; recover 1 - u at full precision.
double unit_complement(double u, double xc) { return xc > 0.0 ? xc : 1.0 - u; }

double lanczos_sum(double xm) {
  double a = kLanczos[0];
  for (int i = 1; i < 9; ++i) a += kLanczos[i] / (xm + i);
  return a;
}

// 1/Gamma in extended precision; 0 at poles. Uses the C library's long double
// gamma so the series terms below carry ~19 significant digits.
ld rgamma_ld(ld x) {
  if (x <= 0 && x == std::floor(x)) return 0;
  if (x > 0) {
    if (x > 1700) return 0;  // below 1e-4600, negligible in every sum here
    return 1 / std::tgamma(x);
  }
  const ld s = sinpi(x);
  const ld reflected = 1 - x;
  if (reflected > 1700) return s < 0 ? -std::numeric_limits<ld>::infinity()
                                     : std::numeric_limits<ld>::infinity();
  return s * std::tgamma(reflected) / kPiL;
}

ld magnitude(ld v) { return std::fabs(v); }
ld magnitude(const cld& v) { return std::abs(v); }

template <class T>
struct Series {
  T sum{};
  ld error = 0;  // absolute rounding-error estimate
  bool converged = false;

  [[nodiscard]] bool accepted(double tol) const {
    const ld mag = magnitude(sum);
    return converged && std::isfinite(static_cast<double>(mag)) && error <= tol * mag;
  }
};

// Power z^k: libm pow for reals (about one ulp), running products are fine
// for the complex case because its error is accounted for below.
ld int_pow(ld z, int k) { return std::pow(z, k); }

// sum_{k>=0} scale_k z^k / Gamma(beta k + alpha) with scale_k = (k + shift)
// or 1, which covers both E_{beta,alpha} and its termwise z-derivative.
template <class T>
Series<T> ml_sum(ld beta, ld alpha, T z, bool derivative) {
  Series<T> out;
  const ld az = magnitude(z);
  // Past this index the terms decay monotonically.
  const double peak = az > 0 ? (std::pow(static_cast<double>(az), 1.0 / static_cast<double>(beta)) -
                                static_cast<double>(alpha)) / static_cast<double>(beta)
                             : 0.0;
  if (peak > kMlSeriesCap) return out;

  constexpr bool is_complex = !std::is_same_v<T, ld>;
  T zk = T(1);
  int small_run = 0;
  const int first = derivative ? 1 : 0;
  for (int k = first; k < kMlSeriesCap; ++k) {
    const int power = derivative ? k - 1 : k;
    if constexpr (is_complex) {
      if (k > first) zk *= z;
    } else {
      zk = int_pow(z, power);
    }
    const ld scale = derivative ? static_cast<ld>(k) : 1;
    const T term = zk * (scale * rgamma_ld(beta * k + alpha));
    const ld mag = magnitude(term);
    if (!std::isfinite(mag)) return out;
    out.sum += term;
    const ld per_term = is_complex ? static_cast<ld>(power + 4) : ld(4);
    out.error += per_term * kEpsL * mag;
    if (k > peak + 1 && mag <= kEpsL * magnitude(out.sum)) {
      if (++small_run >= 3) {
        out.converged = true;
        break;
      }
    } else {
      small_run = 0;
    }
  }
  // Final rounding of the running sum itself.
  out.error += 2 * kEpsL * magnitude(out.sum);
  return out;
}

// -sum_{k>=1} z^{-k}/Gamma(alpha - beta k), truncated at the smallest term.
struct Asymptotic {
  ld value = 0;
  ld error = 0;
};

Asymptotic ml_algebraic_tail(ld beta, ld alpha, ld z) {
  Asymptotic out;
  ld smallest = std::numeric_limits<ld>::infinity();
  int small_run = 0;
  for (int k = 1; k <= 400; ++k) {
    const ld term = -std::pow(z, -k) * rgamma_ld(alpha - beta * k);
    const ld mag = std::fabs(term);
    if (!std::isfinite(mag)) break;
    if (mag == 0) continue;
    if (mag > smallest) {
      // The expansion starts to diverge; the first omitted term bounds the error.
      out.error = mag;
      return out;
    }
    out.value += term;
    smallest = mag;
    // A lone tiny term can come from an argument next to a Gamma pole.
    if (mag <= kEpsL * std::fabs(out.value)) {
      if (++small_run >= 3) {
        out.error = mag;
        return out;
      }
    } else {
      small_run = 0;
    }
  }
  out.error = std::isfinite(static_cast<double>(smallest)) ? std::numeric_limits<ld>::infinity() : 0;
  return out;
}

std::optional<double> ml_asymptotic(double beta, double alpha, double z) {
  if (beta >= 2.0) return std::nullopt;
  Asymptotic tail = ml_algebraic_tail(beta, alpha, z);
  ld value = tail.value;
  ld error = tail.error;
  const ld x = std::fabs(static_cast<ld>(z));
  const ld root = std::pow(x, 1 / static_cast<ld>(beta));
  if (z > 0) {
    if (root > 11000) throw OverflowError("mittag_leffler: result exceeds the representable range");
    value += std::pow(x, (1 - static_cast<ld>(alpha)) / beta) * std::exp(root) / beta;
  } else if (beta > 1.0) {
    // Conjugate pair of poles of s^{beta-alpha}/(s^beta - z) on the principal sheet.
    const cld zeta = std::polar(root, kPiL / beta);
    const cld contribution = std::pow(zeta, 1 - static_cast<ld>(alpha)) * std::exp(zeta);
    value += 2 * contribution.real() / beta;
  } else if (beta == 1.0) {
    // The pole sits on the branch cut; its weight is O(e^{-x} x^{1-alpha}).
    error += std::exp(-x) * std::pow(x, std::fabs(1 - static_cast<ld>(alpha)));
  }
  error += 2 * kEpsL * std::fabs(value);
  const double result = static_cast<double>(value);
  if (!std::isfinite(result)) throw OverflowError("mittag_leffler: result exceeds the representable range");
  if (error <= kMlTol * std::fabs(value)) return result;
  return std::nullopt;
}

// E_{beta,alpha}(-x), x > 0, 0 < beta < 2, beta != 1, from the Hankel contour
// integral of the Laplace transform (the residue pair is added for beta > 1).
std::optional<double> ml_hankel(double beta, double alpha, double x) {
  if (alpha >= 1.0 + beta) {
    // E_{b,a-b}(z) = 1/Gamma(a-b) + z E_{b,a}(z)
    const auto lower = ml_hankel(beta, alpha - beta, x);
    if (!lower) return std::nullopt;
    return (*lower - rgamma(alpha - beta)) / (-x);
  }
  const double sin_a = sinpi(alpha);
  const double sin_ab = sinpi(alpha - beta);
  const double cos_b = cospi(beta);
  const double sin_b = sinpi(beta);
  auto integrand = [=](double r) -> double {
    if (r <= 0.0) return 0.0;
    const double rb = std::pow(r, beta);
    const double num = rb * sin_a + x * sin_ab;
    const double a = rb + x * cos_b;
    const double b = x * sin_b;
    const double log_scale = -r + (beta - alpha) * std::log(r);
    return std::exp(log_scale) * num / (a * a + b * b);
  };
  const double peak = std::pow(x, 1.0 / beta);
  const double split = std::min(peak, 40.0);
  double err_lo = 0.0, err_hi = 0.0, l1_lo = 0.0, l1_hi = 0.0;
  boost::math::quadrature::tanh_sinh<double> near;
  boost::math::quadrature::exp_sinh<double> far;
  double value = 0.0;
  try {
    value = near.integrate(integrand, 0.0, split, 1e-13, &err_lo, &l1_lo);
    value += far.integrate([&](double r) { return integrand(r + split); }, 0.0, kInf, 1e-13, &err_hi,
                           &l1_hi);
  } catch (const std::exception&) {
    return std::nullopt;
  }
  value /= kPi;
  const double err = (err_lo + err_hi) / kPi;
  if (beta > 1.0) {
    const std::complex<double> zeta = std::polar(peak, kPi / beta);
    value += 2.0 * (std::pow(zeta, 1.0 - alpha) * std::exp(zeta)).real() / beta;
  }
  if (std::isfinite(value) && err <= 10 * kMlTol * std::fabs(value)) return value;
  return std::nullopt;
}

// E_{1,alpha}(-x) for alpha != 1.
std::optional<double> ml_order_one(double alpha, double x) {
  if (alpha < 1.0) {
    const auto upper = ml_order_one(alpha + 1.0, x);
    if (!upper) return std::nullopt;
    return rgamma(alpha) - x * *upper;
  }
  // E_{1,a}(z) = 1/Gamma(a-1) int_0^1 e^{zs} (1-s)^{a-2} ds
  boost::math::quadrature::tanh_sinh<double> quad;
  double err = 0.0;
  double value = 0.0;
  try {
    value = quad.integrate(
        [=](double s, double xc) {
          const double sc = unit_complement(s, xc);
          if (sc <= 0.0) return 0.0;
          return std::exp(-x * s + (alpha - 2.0) * std::log(sc));
        },
        0.0,
        1.0, 1e-13, &err);
  } catch (const std::exception&) {
    return std::nullopt;
  }
  value *= rgamma(alpha - 1.0);
  err *= std::fabs(rgamma(alpha - 1.0));
  if (std::isfinite(value) && err <= 10 * kMlTol * std::fabs(value)) return value;
  return std::nullopt;
}

[[noreturn]] void fail_ml(const MlParams& p, const std::string& z) {
  throw ConvergenceError("mittag_leffler: no evaluation regime met the error bound for beta=" +
                         std::to_string(p.beta()) + ", alpha=" + std::to_string(p.alpha()) +
                         ", z=" + z);
}

}  // namespace

FracOrder::FracOrder(double beta) : beta_(beta) {
  if (!(beta > 0.0 && beta <= 1.0))
    throw DomainError("fractional order must satisfy 0 < beta <= 1, got " + std::to_string(beta));
}

MlParams::MlParams(double beta, double alpha) : beta_(beta), alpha_(alpha) {
  if (!(beta > 0.0) || !(alpha > 0.0) || !std::isfinite(beta) || !std::isfinite(alpha))
    throw DomainError("Mittag-Leffler parameters must be positive and finite");
}

TaylorSeries::TaylorSeries(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {
  for (double c : coeffs_)
    if (!std::isfinite(c)) throw DomainError("Taylor coefficients must be finite");
}

double gamma(double x) {
  if (std::isnan(x)) return x;
  if (is_nonpositive_integer(x))
    throw PoleError("gamma: pole at non-positive integer " + std::to_string(x));
  if (x < 0.5) return kPi / (sinpi(x) * gamma(1.0 - x));
  if (x > 171.7) return kInf;
  const double xm = x - 1.0;
  const double t = xm + kLanczosG + 0.5;
  // t^{xm+1/2} split in two halves so it stays finite up to the overflow point.
  const double half = std::pow(t, 0.5 * (xm + 0.5));
  return std::sqrt(2.0 * kPi) * half * (half * std::exp(-t)) * lanczos_sum(xm);
}

double log_gamma(double x) {
  if (is_nonpositive_integer(x)) return kInf;
  if (x < 0.5) return std::log(kPi / std::fabs(sinpi(x))) - log_gamma(1.0 - x);
  const double xm = x - 1.0;
  const double t = xm + kLanczosG + 0.5;
  return 0.5 * std::log(2.0 * kPi) + (xm + 0.5) * std::log(t) - t + std::log(lanczos_sum(xm));
}

double rgamma(double x) {
  if (is_nonpositive_integer(x)) return 0.0;
  if (x > 171.0) return std::exp(-log_gamma(x));
  if (x < 0.5) return sinpi(x) * gamma(1.0 - x) / kPi;
  return 1.0 / gamma(x);
}

double mittag_leffler(const MlParams& p, double z) {
  if (!std::isfinite(z)) throw DomainError("mittag_leffler: argument must be finite");
  const double beta = p.beta();
  const double alpha = p.alpha();
  if (z == 0.0) return rgamma(alpha);
  if (beta == 1.0 && alpha == 1.0) return std::exp(z);

  const auto series = ml_sum<ld>(beta, alpha, z, false);
  if (series.accepted(kMlTol)) return static_cast<double>(series.sum);

  if (auto v = ml_asymptotic(beta, alpha, z)) return *v;

  if (z < 0.0 && beta < 2.0) {
    const auto v = beta == 1.0 ? ml_order_one(alpha, -z) : ml_hankel(beta, alpha, -z);
    if (v) return *v;
  }
  fail_ml(p, std::to_string(z));
}

std::complex<double> mittag_leffler(const MlParams& p, std::complex<double> z) {
  if (z.imag() == 0.0) return mittag_leffler(p, z.real());
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
    throw DomainError("mittag_leffler: argument must be finite");
  const auto series = ml_sum<cld>(p.beta(), p.alpha(), cld(z.real(), z.imag()), false);
  if (series.accepted(kMlTol))
    return {static_cast<double>(series.sum.real()), static_cast<double>(series.sum.imag())};
  fail_ml(p, "(" + std::to_string(z.real()) + "," + std::to_string(z.imag()) + ")");
}

double ml_partial_r(const MlParams& p, double r, double t_pow_beta) {
  const double z = r * t_pow_beta;
  const auto series = ml_sum<ld>(p.beta(), p.alpha(), z, true);
  if (series.accepted(kMlTol)) return static_cast<double>(series.sum) * t_pow_beta;
  // Reindexed termwise derivative: d/dz E_beta(z) = E_{beta,beta}(z)/beta.
  if (p.alpha() == 1.0)
    return t_pow_beta / p.beta() * mittag_leffler(MlParams(p.beta(), p.beta()), z);
  throw ConvergenceError("ml_partial_r: series cancellation too large for alpha != 1");
}

double wright(double lambda, double mu, double z) {
  if (!(lambda > -1.0)) throw DomainError("wright: lambda must exceed -1");
  if (!std::isfinite(mu) || !std::isfinite(z)) throw DomainError("wright: arguments must be finite");
  ld sum = 0;
  ld power = 1;  // z^k / k!
  int small_run = 0;
  for (int k = 0; k < 10000; ++k) {
    if (k > 0) power *= static_cast<ld>(z) / k;
    const ld term = power * rgamma_ld(static_cast<ld>(lambda) * k + mu);
    if (!std::isfinite(std::fabs(term)) ||
        std::fabs(sum) > std::numeric_limits<double>::max())
      throw OverflowError("wright: partial sums exceed the representable range");
    sum += term;
    if (k >= 10 && std::fabs(power) < 1 && std::fabs(term) <= kEpsL * std::fabs(sum)) {
      if (++small_run >= 5) return static_cast<double>(sum);
    } else {
      small_run = 0;
    }
  }
  throw ConvergenceError("wright: series did not converge in 10000 terms");
}

double kanter_log_a(double beta, double u, double uc) {
  const double q = 1.0 / (1.0 - beta);
  const double s = u <= 0.5 ? std::sin(kPi * u) : std::sin(kPi * uc);
  return std::log(std::sin((1.0 - beta) * kPi * u)) + beta * q * std::log(std::sin(beta * kPi * u)) -
         q * std::log(s);
}

double g_density(FracOrder order, double x, double t) {
  if (order.degenerate())
    throw DegenerateOrderError("g_density: beta = 1 is a point mass, no density");
  if (!(t > 0.0) || !(x >= 0.0) || !std::isfinite(x) || !std::isfinite(t))
    throw DomainError("g_density: requires t > 0 and x >= 0");
  const double beta = order.value();
  const double scale = std::pow(t, -beta);
  const double y = x * scale;

  // Wright series W_{-beta,1-beta}(-y) with a running cancellation estimate.
  ld sum = 0, abs_sum = 0, power = 1;
  bool converged = false;
  int small_run = 0;
  for (int k = 0; k < 4000; ++k) {
    if (k > 0) power *= -static_cast<ld>(y) / k;
    const ld term = power * rgamma_ld(1 - static_cast<ld>(beta) * (k + 1));
    if (!std::isfinite(std::fabs(term))) break;
    sum += term;
    abs_sum += std::fabs(term);
    if (k >= 10 && std::fabs(term) <= kEpsL * std::fabs(sum)) {
      if (++small_run >= 5) {
        converged = true;
        break;
      }
    } else {
      small_run = 0;
    }
  }
  if (converged && 8 * kEpsL * abs_sum <= 1e-10L * std::fabs(sum))
    return std::max(0.0, static_cast<double>(sum)) * scale;

  // Tail: positive integrand, no cancellation.
  const double p = 1.0 / (1.0 - beta);
  const double yp = std::pow(y, p);
  boost::math::quadrature::tanh_sinh<double> quad;
  double err = 0.0;
  const double integral = quad.integrate(
      [=](double u, double xc) {
        const double uc = unit_complement(u, xc);
        if (u <= 0.0 || uc <= 0.0) return 0.0;
        const double la = kanter_log_a(beta, u, uc);
        return std::exp(la - std::exp(la) * yp);
      },
      0.0, 1.0, 1e-12, &err);
  if (!(err <= 1e-8 * integral) && integral != 0.0)
    throw ConvergenceError("g_density: tail quadrature did not converge");
  if (integral == 0.0) return 0.0;
  return scale * p * std::pow(y, p - 1.0) * integral;
}

double transform_series(const TaylorSeries& f, FracOrder order, double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("transform_series: requires t >= 0");
  const ld beta = order.value();
  ld sum = 0;
  const auto c = f.coeffs();
  for (std::size_t n = 0; n < c.size(); ++n) {
    if (c[n] == 0.0) continue;
    const ld nb = beta * static_cast<ld>(n);
    const ld tp = n == 0 ? ld(1) : std::pow(static_cast<ld>(t), nb);
    sum += c[n] * tp * rgamma_ld(nb + 1);
  }
  return static_cast<double>(sum);
}

}  // namespace fracmc
