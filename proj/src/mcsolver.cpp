#include "fracmc/mcsolver.hpp"

#include <algorithm>
#include <cmath>

#include "fracmc/catalog.hpp"
#include "fracmc/errors.hpp"
#include "parallel.hpp"

namespace fracmc {

TimeGrid::TimeGrid(std::vector<double> times) : times_(std::move(times)) {
  for (std::size_t i = 0; i < times_.size(); ++i) {
    if (!std::isfinite(times_[i]) || times_[i] < 0.0) throw DomainError("time grid: times must be finite and >= 0");
    if (i > 0 && !(times_[i] > times_[i - 1])) throw DomainError("time grid: times must be strictly increasing");
  }
}

TimeGrid TimeGrid::uniform(double t_end, std::size_t n) {
  if (n == 0 || !(t_end > 0.0)) throw DomainError("time grid: need n >= 1 and t_end > 0");
  std::vector<double> t(n);
  for (std::size_t k = 1; k <= n; ++k) t[k - 1] = t_end * static_cast<double>(k) / static_cast<double>(n);
  return TimeGrid(std::move(t));
}

TimeGrid TimeGrid::linspace(double t_begin, double t_end, std::size_t n) {
  if (n < 2 || !(t_end > t_begin)) throw DomainError("time grid: need n >= 2 and t_end > t_begin");
  std::vector<double> t(n);
  const double last = static_cast<double>(n - 1);
  for (std::size_t k = 0; k < n; ++k)
    t[k] = (t_begin * (last - static_cast<double>(k)) + t_end * static_cast<double>(k)) / last;
  return TimeGrid(std::move(t));
}

std::vector<TimeSampleBatch> sample_grid(FracOrder beta, const TimeGrid& grid, std::size_t m, std::uint64_t seed,
                                         bool coupled, unsigned threads) {
  if (m < 1) throw DomainError("sample_grid: m must be >= 1");
  const std::size_t n = grid.size();
  std::vector<TimeSampleBatch> out(n);
  if (coupled) {
    std::vector<double> base(m);
    detail::parallel_for(m, threads, [&](std::size_t j) {
      RngStream rng(seed, j);
      base[j] = sample_inverse_time(beta, 1.0, rng);
    });
    detail::parallel_for(n, threads, [&](std::size_t i) {
      const double t = grid[i];
      out[i].t = t;
      if (t == 0.0) return;
      const double scale = beta.degenerate() ? t : std::pow(t, beta.value());
      out[i].samples.resize(m);
      for (std::size_t j = 0; j < m; ++j) out[i].samples[j] = scale * base[j];
    });
    return out;
  }
  detail::parallel_for(n, threads, [&](std::size_t i) {
    const double t = grid[i];
    out[i].t = t;
    if (t == 0.0) return;
    out[i].samples.resize(m);
    for (std::size_t j = 0; j < m; ++j) {
      RngStream rng(seed, static_cast<std::uint64_t>(i) * m + j);
      out[i].samples[j] = sample_inverse_time(beta, t, rng);
    }
  });
  return out;
}

McEstimate estimate_mean(double t, std::span<const double> values) {
  const std::size_t m = values.size();
  if (m < 2) throw DomainError("estimate_mean: need at least two values");
  long double sum = 0;
  for (double v : values) sum += v;
  const long double mean = sum / static_cast<long double>(m);
  long double ss = 0;
  for (double v : values) {
    const long double d = v - mean;
    ss += d * d;
  }
  const long double var = ss / static_cast<long double>(m - 1);
  const double se = static_cast<double>(std::sqrt(var / static_cast<long double>(m)));
  if (!std::isfinite(static_cast<double>(mean)) || !std::isfinite(se))
    throw OverflowError("estimate_mean: non-finite sample mean at t = " + std::to_string(t));
  return {t, static_cast<double>(mean), se, m};
}

std::vector<McEstimate> solve_mc(const LinearFdeProblem& prob, const TimeGrid& grid, std::size_t m,
                                 std::uint64_t seed, const McOptions& options) {
  prob.validate();
  if (m < 2) throw DomainError("solve_mc: m must be >= 2");
  std::vector<TimeSampleBatch> batches = sample_grid(prob.beta, grid, m, seed, options.coupled, options.threads);

  double t_max = 0.0;
  for (const auto& b : batches)
    for (double s : b.samples) t_max = std::max(t_max, s);

  std::optional<DenseSolution> sol;
  if (t_max > 0.0) sol = integrate(prob.ode_system(), t_max, options.integrate);

  std::vector<McEstimate> out(grid.size());
  detail::parallel_for(grid.size(), options.threads, [&](std::size_t i) {
    auto& samples = batches[i].samples;
    if (samples.empty()) {
      out[i] = {grid[i], prob.initial_conditions[0], 0.0, m};
      return;
    }
    std::sort(samples.begin(), samples.end());
    const std::vector<double> z = sol->eval_component(samples, 0);
    out[i] = estimate_mean(grid[i], z);
  });
  return out;
}

std::optional<std::vector<double>> solve_closed_form(const LinearFdeProblem& prob, const TimeGrid& grid) {
  prob.validate();
  std::function<double(double)> f = prob.closed_form;
  const auto& a = prob.coefficients;
  const auto& ic = prob.initial_conditions;
  const FracOrder beta = prob.beta;
  if (!f && prob.forcing.kind == Forcing::Kind::None) {
    if (prob.order() == 1) {
      const double rate = -a[1] / a[0];
      const double z0 = ic[0];
      f = [=](double t) { return z0 * exp_beta(rate, beta, t); };
    } else if (prob.order() == 2) {
      const RootConstants c = second_order_constants(a[1], a[0], a[2], ic[0], ic[1]);
      f = [=, a2 = a[1], a1 = a[0], a0 = a[2]](double t) {
        return second_order_homogeneous(a2, a1, a0, c.c1, c.c2, beta, t);
      };
    }
  }
  if (!f) return std::nullopt;
  std::vector<double> out(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) out[i] = grid[i] == 0.0 ? ic[0] : f(grid[i]);
  return out;
}

double TrajectoryTable::fraction_within() const {
  std::size_t with = 0, hits = 0;
  for (const auto& r : rows) {
    if (!r.closed_form) continue;
    ++with;
    if (r.within_4se) ++hits;
  }
  return with == 0 ? 0.0 : static_cast<double>(hits) / static_cast<double>(with);
}

double TrajectoryTable::max_abs_err() const {
  double w = 0.0;
  for (const auto& r : rows)
    if (r.abs_err) w = std::max(w, *r.abs_err);
  return w;
}

TrajectoryTable compare(std::span<const McEstimate> mc, const std::optional<std::vector<double>>& cf) {
  if (cf && cf->size() != mc.size()) throw DomainError("compare: estimate and closed-form lengths differ");
  TrajectoryTable table;
  table.rows.reserve(mc.size());
  for (std::size_t i = 0; i < mc.size(); ++i) {
    TrajectoryRow r{mc[i].t, mc[i].mean, mc[i].std_error, std::nullopt, std::nullopt, false};
    if (cf) {
      r.closed_form = (*cf)[i];
      r.abs_err = std::fabs(mc[i].mean - (*cf)[i]);
      r.within_4se = *r.abs_err <= 4.0 * mc[i].std_error;
    }
    table.rows.push_back(r);
  }
  return table;
}

}  // namespace fracmc
