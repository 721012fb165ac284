#pragma once

// Dormand-Prince 5(4) with Hairer's continuous extension.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace fracmc {

using State = std::vector<double>;

struct OdeSystem {
  /// dydt = f(t, y); must write all `dimension` entries of dydt.
  using Rhs = std::function<void(double t, std::span<const double> y, std::span<double> dydt)>;

  std::size_t dimension = 0;
  Rhs rhs;
  State initial_state;
  double t0 = 0.0;
};

struct IntegrateOptions {
  double rtol = 1e-8;
  double atol = 1e-10;
  std::size_t max_steps = 1'000'000;
};

class DenseSolution {
 public:
  [[nodiscard]] std::size_t dimension() const noexcept { return dim_; }
  [[nodiscard]] std::span<const double> knots() const noexcept { return t_; }
  [[nodiscard]] std::span<const double> state_at_knot(std::size_t i) const {
    return {y_.data() + i * dim_, dim_};
  }
  [[nodiscard]] double t_begin() const noexcept { return t_.front(); }
  [[nodiscard]] double t_end() const noexcept { return t_.back(); }
  [[nodiscard]] std::size_t steps() const noexcept { return t_.size() - 1; }
  /// Order of the step solution; the interpolant is one order lower.
  [[nodiscard]] static constexpr int order() noexcept { return 5; }

  /// State at t; stored states are returned exactly at knots.
  void eval(double t, std::span<double> out) const;
  [[nodiscard]] State eval(double t) const;

  /// Component `c` at every point of a sorted query list, one pass over the knots.
  [[nodiscard]] std::vector<double> eval_component(std::span<const double> sorted_t, std::size_t c) const;

 private:
  friend class DenseBuilder;

  void eval_in(std::size_t step, double t, std::span<double> out) const;
  void eval_component_in(std::size_t step, double t, std::size_t c, double& out) const;
  [[nodiscard]] std::size_t locate(double t) const;

  std::size_t dim_ = 0;
  std::vector<double> t_;
  std::vector<double> y_;      // (steps+1) x dim
  std::vector<double> coeff_;  // steps x 4 x dim: interpolant pieces 2..5
};

[[nodiscard]] DenseSolution integrate(const OdeSystem& sys, double t_end, const IntegrateOptions& opts = {});
[[nodiscard]] DenseSolution integrate(const OdeSystem& sys, double t_end, double rtol, double atol);

/// Fixed step size (t_end - t0)/steps, no error control.
[[nodiscard]] DenseSolution integrate_fixed(const OdeSystem& sys, double t_end, std::size_t steps);

/// Interpolated states at sorted query points inside [t_begin, t_end].
[[nodiscard]] std::vector<State> eval_at(const DenseSolution& sol, std::span<const double> query_points);

}  // namespace fracmc
