#include "fracmc/subordinator.hpp"

#include <bit>
#include <cmath>

#include "fracmc/errors.hpp"

namespace fracmc {
namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// log of (E / a(U))^{1-beta}, the common factor of S and T.
double log_time_factor(double beta, RngStream& rng) {
  const UnitDraw d = rng.unit();
  const double log_e = std::log(rng.exponential());
  return (1.0 - beta) * (log_e - kanter_log_a(beta, d.u, d.uc));
}

void check_time(double t) {
  if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("inverse stable time requires finite t > 0");
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id) : seed_(seed), stream_id_(stream_id) {
  std::uint64_t mix = seed;
  std::uint64_t state = splitmix64(mix) ^ std::rotl(stream_id * 0xD1B54A32D192ED03ULL, 17) ^ stream_id;
  for (auto& w : s_) w = splitmix64(state);
}

RngStream::result_type RngStream::operator()() noexcept {
  const std::uint64_t result = std::rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = std::rotl(s_[3], 45);
  return result;
}

UnitDraw RngStream::unit() noexcept {
  // 52 bits give a half-width offset in (0, 1/2); one bit picks the side.
  const std::uint64_t x = (*this)();
  const double h = (static_cast<double>(x >> 12) + 0.5) * 0x1.0p-53;
  if (x & 1U) return {h, 1.0 - h};
  return {1.0 - h, h};
}

double RngStream::exponential() noexcept {
  const UnitDraw d = unit();
  return d.u < 0.5 ? -std::log(d.u) : -std::log1p(-d.uc);
}

double sample_stable_subordinator(FracOrder beta, RngStream& rng) {
  if (beta.degenerate()) return 1.0;
  const double b = beta.value();
  return std::exp(-log_time_factor(b, rng) / b);
}

double sample_inverse_time(FracOrder beta, double t, RngStream& rng) {
  check_time(t);
  if (beta.degenerate()) return t;
  const double b = beta.value();
  return std::exp(b * std::log(t) + log_time_factor(b, rng));
}

TimeSampleBatch sample_batch(FracOrder beta, double t, std::size_t m, RngStream& rng) {
  check_time(t);
  if (m == 0) throw DomainError("sample_batch requires m >= 1");
  TimeSampleBatch batch{t, {}};
  batch.samples.reserve(m);
  for (std::size_t j = 0; j < m; ++j) batch.samples.push_back(sample_inverse_time(beta, t, rng));
  return batch;
}

}  // namespace fracmc
