#include <cmath>
#include <vector>

#include "doctest.h"
#include "fracmc/errors.hpp"
#include "fracmc/subordinator.hpp"

using namespace fracmc;

namespace {

struct Stats {
  double mean, se;
};

Stats stats(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  const double mean = s / static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()))};
}

}  // namespace

TEST_CASE("streams are reproducible and distinct") {
  RngStream a(5, 9), b(5, 9), c(5, 10), d(6, 9);
  for (int i = 0; i < 10; ++i) {
    const auto x = a();
    CHECK(x == b());
    CHECK(x != c());
    CHECK(x != d());
  }
  CHECK(a.seed() == 5);
  CHECK(a.stream_id() == 9);
}

TEST_CASE("unit draws are open and complementary") {
  RngStream r(1, 2);
  for (int i = 0; i < 100000; ++i) {
    const UnitDraw u = r.unit();
    REQUIRE(u.u > 0.0);
    REQUIRE(u.u < 1.0);
    REQUIRE(u.uc > 0.0);
    REQUIRE(u.u + u.uc == 1.0);
    REQUIRE(r.exponential() > 0.0);
  }
}

TEST_CASE("exponential variates have mean and variance 1") {
  RngStream r(3, 0);
  std::vector<double> v(200000);
  for (double& x : v) x = r.exponential();
  const Stats s = stats(v);
  CHECK(std::fabs(s.mean - 1.0) < 4.0 * s.se);
}

TEST_CASE("beta = 1 is the point mass") {
  RngStream r(1, 1);
  CHECK(sample_stable_subordinator(FracOrder(1.0), r) == 1.0);
  CHECK(sample_inverse_time(FracOrder(1.0), 2.5, r) == 2.5);
  const auto b = sample_batch(FracOrder(1.0), 0.75, 10, r);
  for (double x : b.samples) CHECK(x == 0.75);
}

TEST_CASE("stable law Laplace transform exp(-lambda^beta)") {
  for (double beta : {0.3, 0.6, 0.9}) {
    RngStream r(11, 0);
    for (double lambda : {0.5, 1.0, 2.0}) {
      std::vector<double> v(100000);
      for (double& x : v) x = std::exp(-lambda * sample_stable_subordinator(FracOrder(beta), r));
      const Stats s = stats(v);
      INFO("beta=" << beta << " lambda=" << lambda);
      CHECK(std::fabs(s.mean - std::exp(-std::pow(lambda, beta))) < 4.0 * s.se);
    }
  }
}

TEST_CASE("P(S <= 1) at beta = 1/2 is erfc(1/2)") {
  RngStream r(2024, 0);
  const int m = 200000;
  int hits = 0;
  for (int i = 0; i < m; ++i) hits += sample_stable_subordinator(FracOrder(0.5), r) <= 1.0;
  const double p = 0.47950012218695346;
  const double se = std::sqrt(p * (1 - p) / m);
  CHECK(std::fabs(hits / static_cast<double>(m) - p) < 4.0 * se);
}

TEST_CASE("inverse time moments k! t^{k beta}/Gamma(k beta + 1)") {
  for (double beta : {0.3, 0.7}) {
    for (double t : {0.5, 2.0}) {
      RngStream r(77, static_cast<std::uint64_t>(beta * 10 + t));
      const auto b = sample_batch(FracOrder(beta), t, 100000, r);
      for (int k = 1; k <= 3; ++k) {
        std::vector<double> p(b.samples.size());
        for (std::size_t j = 0; j < p.size(); ++j) p[j] = std::pow(b.samples[j], k);
        const Stats s = stats(p);
        const double expect = std::tgamma(k + 1.0) * std::pow(t, k * beta) / std::tgamma(k * beta + 1.0);
        INFO("beta=" << beta << " t=" << t << " k=" << k);
        CHECK(std::fabs(s.mean - expect) < 4.0 * s.se);
      }
    }
  }
}

TEST_CASE("scaling T_beta(t) = t^beta T_beta(1) in distribution via identical streams") {
  RngStream a(4, 4), b(4, 4);
  for (int i = 0; i < 100; ++i) {
    const double x = sample_inverse_time(FracOrder(0.6), 3.0, a);
    const double y = sample_inverse_time(FracOrder(0.6), 1.0, b);
    CHECK(x == doctest::Approx(std::pow(3.0, 0.6) * y).epsilon(1e-13));
  }
}

TEST_CASE("sampler preconditions") {
  RngStream r(1, 1);
  CHECK_THROWS_AS((void)sample_batch(FracOrder(0.5), 1.0, 0, r), DomainError);
  CHECK_THROWS_AS((void)sample_batch(FracOrder(0.5), 0.0, 5, r), DomainError);
  CHECK_THROWS_AS((void)sample_inverse_time(FracOrder(0.5), -1.0, r), DomainError);
}
