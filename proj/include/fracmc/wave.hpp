#pragma once

// Fractional d'Alembert fields
//   u_beta(x,t) = 1/2 E[f(x + c T_beta(t)) + f(x - c T_beta(t))]
// with zero initial velocity.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fracmc/mcsolver.hpp"
#include "fracmc/specfun.hpp"

namespace fracmc {

struct WaveProfile {
  std::string name;
  std::string formula;
  std::function<double(double)> f;
  /// inf f and sup f over the real line.
  double lower;
  double upper;
};

/// gauss10 = exp(-10 x^2), gauss = exp(-x^2), sech, triangle, const.
[[nodiscard]] const std::vector<WaveProfile>& wave_profiles();
[[nodiscard]] const WaveProfile& find_profile(std::string_view name);

struct WaveProblem {
  double c = 0.5;
  std::function<double(double)> f;
  std::string f_name = "custom";
  FracOrder beta{1.0};
  /// Range of f when known; otherwise the t = 0 row is used.
  std::optional<double> f_lower;
  std::optional<double> f_upper;

  [[nodiscard]] static WaveProblem from_profile(const WaveProfile& p, double c, FracOrder beta);
  void validate() const;
};

struct WaveGridSpec {
  double x_min = -2.0;
  double x_max = 2.0;
  std::size_t nx = 81;
  /// Non-negative, strictly increasing; t = 0 rows are f(x).
  TimeGrid t;
};

/// x_i = (x_min (N-1-i) + x_max i)/(N-1), so symmetric bounds give an exactly
/// symmetric grid.
[[nodiscard]] std::vector<double> wave_x_grid(double x_min, double x_max, std::size_t nx);

struct FieldGrid {
  std::vector<double> x;
  std::vector<double> t;
  std::vector<double> u;       // row-major, t.size() x x.size()
  std::vector<double> stderr_;  // same shape
  double f_lower = 0.0;
  double f_upper = 0.0;

  [[nodiscard]] double at(std::size_t it, std::size_t ix) const { return u[it * x.size() + ix]; }
  [[nodiscard]] double se(std::size_t it, std::size_t ix) const { return stderr_[it * x.size() + ix]; }
};

/// One T-batch per time slice, shared by every x. Slice k draws from the
/// streams of sample_grid in fresh mode.
[[nodiscard]] FieldGrid solve_wave(const WaveProblem& prob, const WaveGridSpec& spec, std::size_t m,
                                   std::uint64_t seed, unsigned threads = 1);

/// 1/2 [f(x + c t) + f(x - c t)].
[[nodiscard]] FieldGrid classical_wave(const WaveProblem& prob, const WaveGridSpec& spec);

/// f_lower <= u <= f_upper on every cell, up to a few ulps of max |f|.
[[nodiscard]] bool max_principle_check(const FieldGrid& field);

}  // namespace fracmc
