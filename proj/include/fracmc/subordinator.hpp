#pragma once

// Random variates for the standard one-sided beta-stable law S and the
// inverse stable time T_beta(t) = (t/S)^beta.

#include <array>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <vector>

#include "fracmc/specfun.hpp"

namespace fracmc {

/// A uniform variate in (0,1) together with its exact complement 1 - u.
struct UnitDraw {
  double u;
  double uc;
};

/// xoshiro256** seeded by splitmix64 from (seed, stream_id). Identical pairs
/// reproduce identical sequences.
class RngStream {
 public:
  using result_type = std::uint64_t;

  RngStream(std::uint64_t seed, std::uint64_t stream_id);

  [[nodiscard]] std::uint64_t seed() const noexcept { return seed_; }
  [[nodiscard]] std::uint64_t stream_id() const noexcept { return stream_id_; }

  result_type operator()() noexcept;
  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  /// Open-interval uniform; neither u nor uc is ever 0.
  UnitDraw unit() noexcept;
  double uniform() noexcept { return unit().u; }
  /// Exp(1) variate, strictly positive and finite.
  double exponential() noexcept;

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::array<std::uint64_t, 4> s_{};
};

struct TimeSampleBatch {
  double t;
  std::vector<double> samples;
};

/// One draw of S with E[exp(-lambda S)] = exp(-lambda^beta), via Kanter's
/// representation S = (a(U)/E)^{(1-beta)/beta}. Returns 1 for beta == 1.
[[nodiscard]] double sample_stable_subordinator(FracOrder beta, RngStream& rng);

/// One draw of T_beta(t) = (t/S)^beta, computed in log space as
/// t^beta (E/a(U))^{1-beta}. Returns t exactly for beta == 1.
[[nodiscard]] double sample_inverse_time(FracOrder beta, double t, RngStream& rng);

/// m consecutive draws of sample_inverse_time from `rng`.
[[nodiscard]] TimeSampleBatch sample_batch(FracOrder beta, double t, std::size_t m, RngStream& rng);

}  // namespace fracmc
