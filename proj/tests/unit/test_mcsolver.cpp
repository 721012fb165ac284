#include <cmath>

#include "doctest.h"
#include "fracmc/catalog.hpp"
#include "fracmc/errors.hpp"
#include "fracmc/mcsolver.hpp"

using namespace fracmc;

namespace {

LinearFdeProblem preset(const char* name, double beta, const ParamMap& over = {}) {
  const Preset& p = find_preset(name);
  return p.build(FracOrder(beta), resolve_params(p, over));
}

}  // namespace

TEST_CASE("time grid validation") {
  CHECK_THROWS_AS(TimeGrid({1.0, 1.0}), DomainError);
  CHECK_THROWS_AS(TimeGrid({2.0, 1.0}), DomainError);
  CHECK_THROWS_AS(TimeGrid({-1.0}), DomainError);
  CHECK_THROWS_AS(TimeGrid({INFINITY}), DomainError);
  const TimeGrid g = TimeGrid::uniform(5.0, 50);
  CHECK(g.size() == 50);
  CHECK(g[0] == 0.1);
  CHECK(g[49] == 5.0);
  const TimeGrid l = TimeGrid::linspace(0.0, 5.0, 100);
  CHECK(l[0] == 0.0);
  CHECK(l[99] == 5.0);
}

TEST_CASE("RC preset at t = 1 matches E_1/2(-1)") {
  const auto est = solve_mc(preset("rc", 0.5), TimeGrid({1.0}), 100000, 42);
  REQUIRE(est.size() == 1);
  CHECK(est[0].m == 100000);
  CHECK(std::fabs(est[0].mean - 0.427583576155807) < 4.0 * est[0].std_error);
}

TEST_CASE("LC sine preset at t = 1 matches E_{1,1.5}(-1)") {
  const auto est = solve_mc(preset("lc-sin", 0.5), TimeGrid({1.0}), 100000, 43);
  CHECK(std::fabs(est[0].mean - 0.60715770584139373) < 4.0 * est[0].std_error);
}

TEST_CASE("beta = 1 reproduces the integrator exactly") {
  for (const auto& pr : presets()) {
    const LinearFdeProblem prob = pr.build(FracOrder(1.0), resolve_params(pr, {}));
    const TimeGrid grid = TimeGrid::uniform(2.0, 10);
    McOptions o;
    const auto est = solve_mc(prob, grid, 4, 1, o);
    const auto sol = integrate(prob.ode_system(), 2.0, o.integrate);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      INFO(pr.name << " t=" << grid[i]);
      CHECK(est[i].std_error == 0.0);
      CHECK(std::fabs(est[i].mean - sol.eval(grid[i])[0]) < 1e-9);
    }
  }
}

TEST_CASE("t = 0 is exact and t -> 0 recovers the initial value") {
  for (const auto& pr : presets()) {
    const LinearFdeProblem prob = pr.build(FracOrder(0.5), resolve_params(pr, {}));
    const auto est = solve_mc(prob, TimeGrid({0.0, 1e-8}), 1000, 3);
    INFO(pr.name);
    CHECK(est[0].mean == prob.initial_conditions[0]);
    CHECK(est[0].std_error == 0.0);
    CHECK(std::fabs(est[1].mean - prob.initial_conditions[0]) <= 1e-3);
  }
}

TEST_CASE("stderr halves when m quadruples") {
  const TimeGrid grid = TimeGrid::uniform(5.0, 20);
  const auto a = solve_mc(preset("rc", 0.5), grid, 10000, 5);
  const auto b = solve_mc(preset("rc", 0.5), grid, 40000, 6);
  double ratio = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    CHECK(a[i].std_error > 0.0);
    ratio += b[i].std_error / a[i].std_error;
  }
  ratio /= static_cast<double>(grid.size());
  CHECK(ratio > 0.4);
  CHECK(ratio < 0.6);
}

TEST_CASE("results do not depend on the thread count") {
  const TimeGrid grid = TimeGrid::uniform(3.0, 7);
  for (bool coupled : {false, true}) {
    McOptions one{coupled, 1, {}}, many{coupled, 4, {}};
    const auto a = solve_mc(preset("lc-cos", 0.7), grid, 3000, 9, one);
    const auto b = solve_mc(preset("lc-cos", 0.7), grid, 3000, 9, many);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      CHECK(a[i].mean == b[i].mean);
      CHECK(a[i].std_error == b[i].std_error);
    }
  }
}

TEST_CASE("coupled sampling scales one base draw") {
  const TimeGrid grid({0.5, 2.0});
  const auto b = sample_grid(FracOrder(0.6), grid, 50, 12, true);
  for (std::size_t j = 0; j < 50; ++j)
    CHECK(b[1].samples[j] == doctest::Approx(std::pow(4.0, 0.6) * b[0].samples[j]).epsilon(1e-14));
}

TEST_CASE("closed forms") {
  const TimeGrid grid({0.0, 1.0});
  const auto cf = solve_closed_form(preset("rc", 0.5), grid);
  REQUIRE(cf);
  CHECK((*cf)[0] == 1.0);
  CHECK((*cf)[1] == doctest::Approx(0.427583576155807).epsilon(1e-12));

  LinearFdeProblem custom;
  custom.coefficients = {3.0, 1.0, 2.0};  // z'' + 3z' + 2z = 0
  custom.initial_conditions = {1.0, 0.0};
  custom.beta = FracOrder(0.5);
  const auto generic = solve_closed_form(custom, grid);
  REQUIRE(generic);
  const double tb = 1.0;
  CHECK((*generic)[1] == doctest::Approx(2.0 * mittag_leffler(MlParams(0.5, 1), -tb) -
                                         mittag_leffler(MlParams(0.5, 1), -2.0 * tb))
                             .epsilon(1e-12));

  custom.forcing = Forcing{Forcing::Kind::Sin, 1.0, 3.0};
  CHECK_FALSE(solve_closed_form(custom, grid).has_value());
  custom.forcing = {};
  custom.coefficients = {1.0, 2.0, 1.0, 5.0};
  custom.initial_conditions = {1.0, 0.0, 0.0};
  CHECK_FALSE(solve_closed_form(custom, grid).has_value());
}

TEST_CASE("compare") {
  const std::vector<McEstimate> mc{{1.0, 0.5, 0.01, 10}, {2.0, 0.3, 0.01, 10}};
  const auto same = compare(mc, std::vector<double>{0.5, 0.3});
  for (const auto& r : same.rows) {
    CHECK(*r.abs_err == 0.0);
    CHECK(r.within_4se);
  }
  CHECK(same.fraction_within() == 1.0);
  const auto off = compare(mc, std::vector<double>{0.5, 0.5});
  CHECK(off.fraction_within() == 0.5);
  CHECK(off.max_abs_err() == doctest::Approx(0.2));
  CHECK_THROWS_AS((void)compare(mc, std::vector<double>{1.0}), DomainError);
  const auto none = compare(mc, std::nullopt);
  CHECK_FALSE(none.rows[0].closed_form.has_value());
}

TEST_CASE("invalid problems and sizes") {
  LinearFdeProblem p;
  p.coefficients = {0.0, 1.0};
  p.initial_conditions = {1.0};
  CHECK_THROWS_AS((void)solve_mc(p, TimeGrid({1.0}), 10, 1), DomainError);
  CHECK_THROWS_AS((void)solve_mc(preset("rc", 0.5), TimeGrid({1.0}), 1, 1), DomainError);
  p.coefficients = {1.0, 1.0};
  p.initial_conditions = {1.0, 2.0};
  CHECK_THROWS_AS((void)solve_mc(p, TimeGrid({1.0}), 10, 1), DomainError);
}

TEST_CASE("entire solutions agree with the Taylor-coefficient transform") {
  // LC cosine branch, z = cos t
  std::vector<double> c(41);
  for (std::size_t n = 0; n < c.size(); ++n) c[n] = n % 4 == 0 ? 1.0 : n % 4 == 2 ? -1.0 : 0.0;
  const TaylorSeries series(c);
  const auto est = solve_mc(preset("lc-cos", 0.6), TimeGrid({0.5, 1.0}), 50000, 17);
  for (const auto& e : est)
    CHECK(std::fabs(e.mean - transform_series(series, FracOrder(0.6), e.t)) < 4.0 * e.std_error + 1e-10);
}
