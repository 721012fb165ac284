#include <cmath>

#include "doctest.h"
#include "fracmc/errors.hpp"
#include "fracmc/wave.hpp"

using namespace fracmc;

namespace {

WaveGridSpec spec(std::vector<double> t, std::size_t nx = 41) {
  WaveGridSpec s;
  s.x_min = -2.0;
  s.x_max = 2.0;
  s.nx = nx;
  s.t = TimeGrid(std::move(t));
  return s;
}

}  // namespace

TEST_CASE("x grid is exactly symmetric") {
  const auto x = wave_x_grid(-2.0, 2.0, 41);
  for (std::size_t i = 0; i < x.size(); ++i) CHECK(x[i] == -x[x.size() - 1 - i]);
  CHECK(x[20] == 0.0);
  CHECK_THROWS_AS((void)wave_x_grid(1.0, 1.0, 5), DomainError);
}

TEST_CASE("beta = 1 equals d'Alembert") {
  const auto prob = WaveProblem::from_profile(find_profile("gauss10"), 0.5, FracOrder(1.0));
  const auto s = spec({0.0, 0.5, 1.0, 2.0});
  const FieldGrid mc = solve_wave(prob, s, 8, 1);
  const FieldGrid exact = classical_wave(prob, s);
  for (std::size_t k = 0; k < mc.u.size(); ++k) CHECK(std::fabs(mc.u[k] - exact.u[k]) <= 1e-12);
}

TEST_CASE("t = 0 row is f") {
  const auto prob = WaveProblem::from_profile(find_profile("sech"), 0.5, FracOrder(0.3));
  const FieldGrid g = solve_wave(prob, spec({0.0, 1.0}), 100, 2);
  for (std::size_t i = 0; i < g.x.size(); ++i) CHECK(g.at(0, i) == 1.0 / std::cosh(g.x[i]));
}

TEST_CASE("even profiles give exactly even fields") {
  const auto prob = WaveProblem::from_profile(find_profile("gauss10"), 0.5, FracOrder(0.5));
  const FieldGrid g = solve_wave(prob, spec({0.5, 1.5}), 2000, 3, 3);
  for (std::size_t it = 0; it < g.t.size(); ++it)
    for (std::size_t i = 0; i < g.x.size(); ++i) CHECK(g.at(it, i) == g.at(it, g.x.size() - 1 - i));
}

TEST_CASE("maximum principle") {
  for (double b : {0.1, 0.5, 0.9}) {
    const auto prob = WaveProblem::from_profile(find_profile("gauss10"), 0.5, FracOrder(b));
    FieldGrid g = solve_wave(prob, spec({0.0, 1.0, 3.0}), 2000, 4);
    CHECK(max_principle_check(g));
    g.u[5] = 1.5;
    CHECK_FALSE(max_principle_check(g));
  }
  const auto flat = WaveProblem::from_profile(find_profile("const"), 0.5, FracOrder(0.5));
  const FieldGrid g = solve_wave(flat, spec({1.0}), 100, 5);
  for (double v : g.u) CHECK(v == 1.0);
  CHECK(max_principle_check(g));
}

TEST_CASE("half-Gaussian oracle at beta = 1/2, x = 0, t = 1") {
  const auto prob = WaveProblem::from_profile(find_profile("gauss10"), 0.5, FracOrder(0.5));
  const FieldGrid g = solve_wave(prob, spec({1.0}, 41), 100000, 6);
  const double u = g.at(0, 20);
  CHECK(std::fabs(u - 0.30151134457776362) < 4.0 * g.se(0, 20));
}

TEST_CASE("continuity as t -> 0") {
  for (double b : {0.3, 0.6, 0.9}) {
    const auto prob = WaveProblem::from_profile(find_profile("gauss10"), 0.5, FracOrder(b));
    const FieldGrid g = solve_wave(prob, spec({1e-8}), 2000, 7);
    double worst = 0.0;
    for (std::size_t i = 0; i < g.x.size(); ++i) worst = std::max(worst, std::fabs(g.at(0, i) - prob.f(g.x[i])));
    INFO("beta=" << b);
    CHECK(worst < 5e-2);
  }
}

TEST_CASE("thread count does not change the field") {
  const auto prob = WaveProblem::from_profile(find_profile("triangle"), 0.5, FracOrder(0.7));
  const FieldGrid a = solve_wave(prob, spec({0.5, 1.0}), 500, 8, 1);
  const FieldGrid b = solve_wave(prob, spec({0.5, 1.0}), 500, 8, 5);
  CHECK(a.u == b.u);
  CHECK(a.stderr_ == b.stderr_);
}

TEST_CASE("wave validation") {
  auto prob = WaveProblem::from_profile(find_profile("gauss"), 0.0, FracOrder(0.5));
  CHECK_THROWS_AS((void)solve_wave(prob, spec({1.0}), 10, 1), DomainError);
  prob.c = 1.0;
  CHECK_THROWS_AS((void)solve_wave(prob, spec({1.0}), 1, 1), DomainError);
  CHECK_THROWS_AS((void)find_profile("nope"), DomainError);
}
