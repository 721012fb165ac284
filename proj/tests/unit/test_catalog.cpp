#include <cmath>
#include <complex>

#include "doctest.h"
#include "fracmc/catalog.hpp"
#include "fracmc/errors.hpp"
#include "fracmc/odeint.hpp"

using namespace fracmc;

TEST_CASE("sixteen tabulated pairs, eight binomial") {
  CHECK(transform_pairs().size() == 16);
  int binomial = 0;
  for (const auto& p : transform_pairs()) binomial += p.binomial;
  CHECK(binomial == 8);
  CHECK_THROWS_AS((void)find_pair("nope"), DomainError);
}

TEST_CASE("every pair reduces to f at beta = 1") {
  for (const auto& p : transform_pairs())
    for (double t : {0.0, 0.4, 1.0, 2.5}) {
      INFO(p.name << " t=" << t);
      CHECK(p.transformed(FracOrder(1.0), t) == doctest::Approx(p.f(t)).epsilon(1e-12));
    }
}

TEST_CASE("tabulated form matches the Taylor-coefficient transform at truncation 40") {
  for (const auto& p : transform_pairs()) {
    const TaylorSeries series(p.taylor(40));
    for (double b : {0.5, 0.9})
      for (double t : {0.0, 0.25, 0.5, 0.75, 1.0}) {
        INFO(p.name << " beta=" << b << " t=" << t);
        CHECK(std::fabs(eval_pair(p, FracOrder(b), t) - transform_series(series, FracOrder(b), t)) < 1e-6);
      }
  }
}

TEST_CASE("Taylor coefficients by the Leibniz rule") {
  const auto c = find_pair("exp*cos").taylor(4);  // Re (1+i)^n
  CHECK(c[0] == 1.0);
  CHECK(c[1] == 1.0);
  CHECK(c[2] == 0.0);
  CHECK(c[3] == -2.0);
  CHECK(c[4] == -4.0);
  const auto g = find_pair("g*sinh").taylor(2);  // e^{t/2} sinh t
  CHECK(g[0] == 0.0);
  CHECK(g[1] == 1.0);
  CHECK(g[2] == 1.0);
}

TEST_CASE("binomial rows agree with complex Mittag-Leffler") {
  for (double b : {0.5, 0.9})
    for (double t : {0.5, 1.0, 2.0}) {
      const double tb = std::pow(t, b);
      const MlParams p(b, 1.0);
      const auto up = mittag_leffler(p, std::complex<double>(tb, tb));
      const auto down = mittag_leffler(p, std::complex<double>(-tb, tb));
      CHECK(eval_pair(find_pair("exp*cos"), FracOrder(b), t) == doctest::Approx(up.real()).epsilon(1e-10));
      CHECK(eval_pair(find_pair("exp*sin"), FracOrder(b), t) == doctest::Approx(up.imag()).epsilon(1e-10));
      CHECK(eval_pair(find_pair("exp(-t)*cos"), FracOrder(b), t) == doctest::Approx(down.real()).epsilon(1e-10));
      CHECK(eval_pair(find_pair("exp(-t)*sin"), FracOrder(b), t) == doctest::Approx(down.imag()).epsilon(1e-10));
      const double gc = 0.5 * (mittag_leffler(p, 1.5 * tb) + mittag_leffler(p, -0.5 * tb));
      CHECK(eval_pair(find_pair("g*cosh"), FracOrder(b), t) == doctest::Approx(gc).epsilon(1e-10));
    }
}

TEST_CASE("building blocks") {
  CHECK(exp_beta(-1.0, FracOrder(0.5), 1.0) == doctest::Approx(0.427583576155807).epsilon(1e-12));
  CHECK(sin_beta(1.0, FracOrder(0.5), 1.0) == doctest::Approx(0.60715770584139373).epsilon(1e-12));
  CHECK(power_beta(0, FracOrder(0.5), 3.0) == 1.0);
  CHECK(power_beta(2, FracOrder(0.5), 1.0) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK_THROWS_AS((void)exp_beta(1.0, FracOrder(0.5), -1.0), DomainError);
}

TEST_CASE("second-order homogeneous root cases match the ODE at beta = 1") {
  struct C {
    double a2, a1, a0;
  };
  for (const C c : {C{1, 3, 2}, C{1, 2, 1}, C{1, 2, 5}, C{1, 0, 4}, C{2, 0, -8}, C{1, -1, 0}}) {
    const RootConstants k = second_order_constants(c.a2, c.a1, c.a0, 1.0, -0.5);
    OdeSystem sys{2,
                  [c](double, std::span<const double> y, std::span<double> d) {
                    d[0] = y[1];
                    d[1] = -(c.a1 * y[1] + c.a0 * y[0]) / c.a2;
                  },
                  {1.0, -0.5},
                  0.0};
    const auto sol = integrate(sys, 2.0, 1e-11, 1e-12);
    for (double t = 0.0; t <= 2.0; t += 0.25) {
      INFO("a=" << c.a2 << "," << c.a1 << "," << c.a0 << " t=" << t);
      CHECK(std::fabs(second_order_homogeneous(c.a2, c.a1, c.a0, k.c1, k.c2, FracOrder(1.0), t) - sol.eval(t)[0]) <
            1e-8);
    }
  }
  CHECK_THROWS_AS((void)second_order_constants(0.0, 1.0, 1.0, 1.0, 0.0), DomainError);
}

TEST_CASE("distinct real roots at fractional order") {
  // r^2 + 3r + 2: roots -1, -2
  const double t = 1.3, b = 0.6;
  const double v = second_order_homogeneous(1, 3, 2, 0.25, 0.75, FracOrder(b), t);
  const double tb = std::pow(t, b);
  CHECK(v == doctest::Approx(0.75 * mittag_leffler(MlParams(b, 1), -tb) + 0.25 * mittag_leffler(MlParams(b, 1), -2 * tb))
                 .epsilon(1e-12));
}

TEST_CASE("beam closed forms") {
  CHECK(beam_uniform_load(1, 1, 1, FracOrder(0.5), 1.0) == doctest::Approx(0.20720694430149581).epsilon(1e-12));
  CHECK(beam_uniform_load(1, 1, 1, FracOrder(0.5), 1.0, FormVariant::Printed) ==
        doctest::Approx(0.16554027763482914).epsilon(1e-12));
  for (double s : {0.0, 0.3, 1.0})
    CHECK(beam_uniform_load(2, 3, 1, FracOrder(1.0), s) ==
          doctest::Approx(3.0 / 48.0 * (s * s * s * s - 2 * s * s * s + s * s)).epsilon(1e-12));
  BeamAxialParams p;
  CHECK(beam_axial_load(p, FracOrder(1.0), 0.25) == doctest::Approx(std::sin(M_PI * 0.25)).epsilon(1e-12));
}

TEST_CASE("nonhom-exp sign variants") {
  const ParamMap p{{"a", 1.0}, {"y0", 1.0}};
  CHECK(nonhomogeneous_presets("nonhom-exp", p, FracOrder(0.5), 1.0, FormVariant::Printed) ==
        doctest::Approx(3.1458654046148522).epsilon(1e-12));
  CHECK(nonhomogeneous_presets("nonhom-exp", p, FracOrder(0.5), 1.0) ==
        doctest::Approx(2.7182818284590452).epsilon(1e-12));
  CHECK_THROWS_AS((void)nonhomogeneous_presets("nonhom-exp", {{"a", -1.0}}, FracOrder(0.5), 1.0), DomainError);
  CHECK_THROWS_AS((void)nonhomogeneous_presets("nonhom-sin", {{"omega", 1.0}}, FracOrder(0.5), 1.0), DomainError);
  CHECK_THROWS_AS((void)nonhomogeneous_presets("nope", {}, FracOrder(0.5), 1.0), DomainError);
}

TEST_CASE("nonhom-t2 variants agree at omega = 1 only") {
  const ParamMap one{{"omega", 1.0}, {"c1", 1.0}, {"c2", 1.0}};
  const ParamMap two{{"omega", 2.0}, {"c1", 1.0}, {"c2", 1.0}};
  const FracOrder b(0.6);
  CHECK(nonhomogeneous_presets("nonhom-t2", one, b, 1.4) ==
        doctest::Approx(nonhomogeneous_presets("nonhom-t2", one, b, 1.4, FormVariant::Printed)).epsilon(1e-13));
  CHECK(std::fabs(nonhomogeneous_presets("nonhom-t2", two, b, 1.4) -
                  nonhomogeneous_presets("nonhom-t2", two, b, 1.4, FormVariant::Printed)) > 1e-3);
}

TEST_CASE("every preset with a closed form matches its ODE at beta = 1") {
  CHECK(presets().size() >= 8);
  for (const auto& pr : presets()) {
    const LinearFdeProblem prob = pr.build(FracOrder(1.0), resolve_params(pr, {}));
    if (!prob.closed_form) continue;
    const auto sol = integrate(prob.ode_system(), 3.0, 1e-11, 1e-12);
    for (double t = 0.0; t <= 3.0; t += 0.25) {
      INFO(pr.name << " t=" << t);
      CHECK(std::fabs(sol.eval(t)[0] - prob.closed_form(t)) < 1e-8);
    }
  }
}

TEST_CASE("preset registry") {
  const Preset& beam = find_preset("beam-uniform");
  const ParamMap d = resolve_params(beam, {});
  CHECK(d.at("L") == 1.0);
  CHECK(d.at("EI") == d.at("w0"));
  CHECK_THROWS_AS((void)resolve_params(beam, {{"bogus", 1.0}}), DomainError);
  CHECK_THROWS_AS((void)find_preset("nope"), DomainError);
  const Preset& rc = find_preset("rc");
  CHECK_THROWS_AS((void)rc.build(FracOrder(0.5), resolve_params(rc, {{"R", -1.0}})), DomainError);
  const Preset& sin = find_preset("nonhom-sin");
  CHECK_THROWS_AS((void)sin.build(FracOrder(0.5), resolve_params(sin, {{"omega", 1.0}})), DomainError);
}
