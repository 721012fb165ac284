#pragma once

// Monte Carlo evaluation of y_beta(t) = E[z(T_beta(t))], where z solves the
// integer-order problem with the same initial data.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "fracmc/odeint.hpp"
#include "fracmc/problem.hpp"
#include "fracmc/subordinator.hpp"

namespace fracmc {

/// Strictly increasing, finite, non-negative times. A leading t = 0 is
/// allowed and is answered exactly.
class TimeGrid {
 public:
  TimeGrid() = default;
  explicit TimeGrid(std::vector<double> times);
  /// n points t_k = t_end * k / n, k = 1..n (excludes 0).
  [[nodiscard]] static TimeGrid uniform(double t_end, std::size_t n);
  /// n points evenly spaced on [t_begin, t_end], endpoints included.
  [[nodiscard]] static TimeGrid linspace(double t_begin, double t_end, std::size_t n);

  [[nodiscard]] std::span<const double> times() const noexcept { return times_; }
  [[nodiscard]] std::size_t size() const noexcept { return times_.size(); }
  [[nodiscard]] double operator[](std::size_t i) const { return times_[i]; }

 private:
  std::vector<double> times_;
};

struct McEstimate {
  double t = 0.0;
  double mean = 0.0;
  double std_error = 0.0;  // sample standard deviation / sqrt(m)
  std::size_t m = 0;
};

struct McOptions {
  /// Reuse one base draw per replicate across the grid, T(t_i) = t_i^beta T(1).
  bool coupled = false;
  unsigned threads = 1;
  IntegrateOptions integrate{1e-10, 1e-12, 1'000'000};
};

/// T-batches for every grid point; empty batch at t = 0. Fresh mode draws
/// replicate j of point i from stream i*m + j; coupled mode uses stream j.
/// The result does not depend on `threads`.
[[nodiscard]] std::vector<TimeSampleBatch> sample_grid(FracOrder beta, const TimeGrid& grid, std::size_t m,
                                                       std::uint64_t seed, bool coupled, unsigned threads = 1);

/// Mean and standard error of `values` (m >= 2), summed in the given order.
[[nodiscard]] McEstimate estimate_mean(double t, std::span<const double> values);

[[nodiscard]] std::vector<McEstimate> solve_mc(const LinearFdeProblem& prob, const TimeGrid& grid, std::size_t m,
                                               std::uint64_t seed, const McOptions& options = {});

/// Analytic y_beta on the grid: the problem's own closed form, else the
/// first-order or second-order homogeneous formulas. nullopt when neither
/// applies.
[[nodiscard]] std::optional<std::vector<double>> solve_closed_form(const LinearFdeProblem& prob,
                                                                   const TimeGrid& grid);

struct TrajectoryRow {
  double t;
  double mc_mean;
  double mc_stderr;
  std::optional<double> closed_form;
  std::optional<double> abs_err;
  /// abs_err <= 4 * mc_stderr; false without a closed form.
  bool within_4se;
};

struct TrajectoryTable {
  std::vector<TrajectoryRow> rows;
  /// Fraction of rows with within_4se set, over rows with a closed form.
  [[nodiscard]] double fraction_within() const;
  [[nodiscard]] double max_abs_err() const;
};

/// Throws DomainError when lengths differ.
[[nodiscard]] TrajectoryTable compare(std::span<const McEstimate> mc, const std::optional<std::vector<double>>& cf);

}  // namespace fracmc
