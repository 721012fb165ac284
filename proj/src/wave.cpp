#include "fracmc/wave.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fracmc/errors.hpp"
#include "parallel.hpp"

namespace fracmc {
namespace {

std::vector<WaveProfile> make_profiles() {
  return {
      {"gauss10", "exp(-10 x^2)", [](double x) { return std::exp(-10.0 * x * x); }, 0.0, 1.0},
      {"gauss", "exp(-x^2)", [](double x) { return std::exp(-x * x); }, 0.0, 1.0},
      {"sech", "1/cosh(x)", [](double x) { return 1.0 / std::cosh(x); }, 0.0, 1.0},
      {"triangle", "max(0, 1 - |x|)", [](double x) { return std::max(0.0, 1.0 - std::fabs(x)); }, 0.0, 1.0},
      {"const", "1", [](double) { return 1.0; }, 1.0, 1.0},
  };
}

FieldGrid empty_field(const WaveProblem& prob, const WaveGridSpec& spec) {
  prob.validate();
  FieldGrid g;
  g.x = wave_x_grid(spec.x_min, spec.x_max, spec.nx);
  g.t.assign(spec.t.times().begin(), spec.t.times().end());
  if (g.t.empty()) throw DomainError("wave: need at least one time");
  g.u.assign(g.t.size() * g.x.size(), 0.0);
  g.stderr_.assign(g.u.size(), 0.0);
  return g;
}

void set_bounds(FieldGrid& g, const WaveProblem& prob) {
  if (prob.f_lower && prob.f_upper) {
    g.f_lower = *prob.f_lower;
    g.f_upper = *prob.f_upper;
    return;
  }
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (double x : g.x) {
    const double v = prob.f(x);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  g.f_lower = lo;
  g.f_upper = hi;
}

}  // namespace

const std::vector<WaveProfile>& wave_profiles() {
  static const std::vector<WaveProfile> all = make_profiles();
  return all;
}

const WaveProfile& find_profile(std::string_view name) {
  for (const auto& p : wave_profiles())
    if (p.name == name) return p;
  throw DomainError("unknown wave profile: " + std::string(name));
}

WaveProblem WaveProblem::from_profile(const WaveProfile& p, double c, FracOrder beta) {
  WaveProblem w;
  w.c = c;
  w.f = p.f;
  w.f_name = p.name;
  w.beta = beta;
  w.f_lower = p.lower;
  w.f_upper = p.upper;
  return w;
}

void WaveProblem::validate() const {
  if (!(c > 0.0) || !std::isfinite(c)) throw DomainError("wave: speed c must be positive and finite");
  if (!f) throw DomainError("wave: missing initial profile");
}

std::vector<double> wave_x_grid(double x_min, double x_max, std::size_t nx) {
  if (nx < 2 || !(x_max > x_min) || !std::isfinite(x_min) || !std::isfinite(x_max))
    throw DomainError("wave: need nx >= 2 and finite x_min < x_max");
  std::vector<double> x(nx);
  const double last = static_cast<double>(nx - 1);
  for (std::size_t i = 0; i < nx; ++i)
    x[i] = (x_min * (last - static_cast<double>(i)) + x_max * static_cast<double>(i)) / last;
  return x;
}

FieldGrid solve_wave(const WaveProblem& prob, const WaveGridSpec& spec, std::size_t m, std::uint64_t seed,
                     unsigned threads) {
  if (m < 2) throw DomainError("wave: m must be >= 2");
  FieldGrid g = empty_field(prob, spec);
  set_bounds(g, prob);
  const std::vector<TimeSampleBatch> batches = sample_grid(prob.beta, spec.t, m, seed, false, threads);
  const std::size_t nx = g.x.size();
  detail::parallel_for(g.t.size() * nx, threads, [&](std::size_t cell) {
    const std::size_t it = cell / nx;
    const double x = g.x[cell % nx];
    if (batches[it].samples.empty()) {
      g.u[cell] = prob.f(x);
      return;
    }
    std::vector<double> v(m);
    for (std::size_t j = 0; j < m; ++j) {
      const double shift = prob.c * batches[it].samples[j];
      v[j] = 0.5 * (prob.f(x + shift) + prob.f(x - shift));
      if (!std::isfinite(v[j])) throw DomainError("wave: profile is not finite at x = " + std::to_string(x));
    }
    const McEstimate e = estimate_mean(g.t[it], v);
    g.u[cell] = e.mean;
    g.stderr_[cell] = e.std_error;
  });
  return g;
}

FieldGrid classical_wave(const WaveProblem& prob, const WaveGridSpec& spec) {
  FieldGrid g = empty_field(prob, spec);
  set_bounds(g, prob);
  const std::size_t nx = g.x.size();
  for (std::size_t it = 0; it < g.t.size(); ++it)
    for (std::size_t ix = 0; ix < nx; ++ix) {
      const double shift = prob.c * g.t[it];
      g.u[it * nx + ix] = 0.5 * (prob.f(g.x[ix] + shift) + prob.f(g.x[ix] - shift));
    }
  return g;
}

bool max_principle_check(const FieldGrid& field) {
  const double slack = 8.0 * std::numeric_limits<double>::epsilon() *
                       std::max({std::fabs(field.f_lower), std::fabs(field.f_upper), 1e-300});
  return std::all_of(field.u.begin(), field.u.end(), [&](double v) {
    return v >= field.f_lower - slack && v <= field.f_upper + slack;
  });
}

}  // namespace fracmc
