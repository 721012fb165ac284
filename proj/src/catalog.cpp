#include "fracmc/catalog.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

#include "fracmc/errors.hpp"

namespace fracmc {
namespace {

using ld = long double;
constexpr double kPi = std::numbers::pi;

double tau(FracOrder beta, double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("closed form: requires finite t >= 0");
  return beta.degenerate() ? t : std::pow(t, beta.value());
}

double ml(double beta, double alpha, double z) { return mittag_leffler(MlParams(beta, alpha), z); }

// d^n/dt^n of a factor at 0, n = 0..order.
using Derivs = std::vector<double>;

Derivs exp_derivs(double a, std::size_t order) {
  Derivs d(order + 1);
  double p = 1.0;
  for (std::size_t n = 0; n <= order; ++n, p *= a) d[n] = p;
  return d;
}

Derivs trig_derivs(double w, std::size_t order, bool sine) {
  Derivs d(order + 1);
  double p = 1.0;
  for (std::size_t n = 0; n <= order; ++n, p *= w) {
    const std::size_t phase = (n + (sine ? 3 : 0)) % 4;  // cos: 1,0,-1,0; sin: 0,1,0,-1
    d[n] = phase == 0 ? p : phase == 2 ? -p : 0.0;
  }
  return d;
}

Derivs hyp_derivs(double w, std::size_t order, bool sine) {
  Derivs d(order + 1);
  double p = 1.0;
  for (std::size_t n = 0; n <= order; ++n, p *= w) d[n] = ((n % 2 == 1) == sine) ? p : 0.0;
  return d;
}

Derivs power_derivs(int k, std::size_t order) {
  Derivs d(order + 1, 0.0);
  if (static_cast<std::size_t>(k) <= order) d[static_cast<std::size_t>(k)] = std::tgamma(k + 1.0);
  return d;
}

ld binom(unsigned n, unsigned k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  ld r = 1;
  for (unsigned i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

Derivs leibniz(const Derivs& f, const Derivs& g) {
  Derivs out(f.size(), 0.0);
  for (std::size_t n = 0; n < f.size(); ++n) {
    ld acc = 0;
    for (std::size_t j = 0; j <= n; ++j)
      acc += binom(static_cast<unsigned>(n), static_cast<unsigned>(j)) * f[j] * g[n - j];
    out[n] = static_cast<double>(acc);
  }
  return out;
}

// sum_n coef(n) t^{n beta}/Gamma(n beta + 1), with |coef(n)| <= bound^n.
template <class Coef>
double binomial_series(Coef coef, double bound, FracOrder beta, double t) {
  const ld b = beta.value();
  const ld tl = t;
  ld sum = 0;
  int quiet = 0;
  for (unsigned n = 0; n < 2000; ++n) {
    const ld tp = n == 0 ? ld(1) : std::pow(tl, b * n);
    const ld rg = 1 / std::tgamma(b * n + 1);
    const ld c = coef(n);
    sum += c * tp * rg;
    const ld envelope = std::pow(static_cast<ld>(bound), static_cast<ld>(n)) * tp * rg;
    if (n > 4 && envelope <= std::numeric_limits<ld>::epsilon() * std::max<ld>(std::fabs(sum), 1e-300L)) {
      if (++quiet >= 3) return static_cast<double>(sum);
    } else {
      quiet = 0;
    }
  }
  throw ConvergenceError("binomial transform series did not converge");
}

// Tabulated binomial coefficient sums, with g^{(j)}(0) = gd^j.
ld cos_coef(unsigned n, ld sign_exp, ld gd) {
  ld acc = 0;
  for (unsigned k = 0; 2 * k <= n; ++k)
    acc += binom(n, 2 * k) * std::pow(gd, static_cast<ld>(n - 2 * k)) * std::pow(sign_exp, ld(k));
  return acc;
}

ld sin_coef(unsigned n, ld sign_exp, ld gd) {
  ld acc = 0;
  for (unsigned k = 0; 2 * k + 1 <= n; ++k)
    acc += binom(n, 2 * k + 1) * std::pow(gd, static_cast<ld>(n - 2 * k - 1)) * std::pow(sign_exp, ld(k));
  return acc;
}

TransformPair simple(std::string name, std::function<double(double)> f,
                     std::function<double(FracOrder, double)> fb, std::function<Derivs(std::size_t)> taylor) {
  return TransformPair{std::move(name), std::move(f), std::move(fb), std::move(taylor), false};
}

std::vector<TransformPair> make_pairs() {
  constexpr double g_rate = 0.5;  // g(t) = exp(t/2) in the g-rows
  std::vector<TransformPair> v;
  v.push_back(power_pair(1));
  v.back().name = "t";
  v.push_back(power_pair(2));
  v.back().name = "t^2";
  v.push_back(power_pair(3));
  v.back().name = "t^n";
  v.push_back(simple(
      "cos", [](double t) { return std::cos(t); }, [](FracOrder b, double t) { return cos_beta(1.0, b, t); },
      [](std::size_t o) { return trig_derivs(1.0, o, false); }));
  v.push_back(simple(
      "sin", [](double t) { return std::sin(t); }, [](FracOrder b, double t) { return sin_beta(1.0, b, t); },
      [](std::size_t o) { return trig_derivs(1.0, o, true); }));
  v.push_back(simple(
      "exp", [](double t) { return std::exp(t); }, [](FracOrder b, double t) { return exp_beta(1.0, b, t); },
      [](std::size_t o) { return exp_derivs(1.0, o); }));
  v.push_back(simple(
      "cosh", [](double t) { return std::cosh(t); }, [](FracOrder b, double t) { return cosh_beta(1.0, b, t); },
      [](std::size_t o) { return hyp_derivs(1.0, o, false); }));
  v.push_back(simple(
      "sinh", [](double t) { return std::sinh(t); }, [](FracOrder b, double t) { return sinh_beta(1.0, b, t); },
      [](std::size_t o) { return hyp_derivs(1.0, o, true); }));

  struct Row {
    const char* name;
    double exp_rate;  // the e^{+-t} or g factor
    bool sine;
    bool hyperbolic;
  };
  const Row rows[] = {
      {"exp*cos", 1.0, false, false},      {"exp(-t)*cos", -1.0, false, false}, {"exp*sin", 1.0, true, false},
      {"exp(-t)*sin", -1.0, true, false},  {"g*cos", g_rate, false, false},     {"g*sin", g_rate, true, false},
      {"g*cosh", g_rate, false, true},     {"g*sinh", g_rate, true, true},
  };
  for (const Row& r : rows) {
    TransformPair p;
    p.name = r.name;
    p.binomial = true;
    const double a = r.exp_rate;
    const bool sine = r.sine;
    const bool hyp = r.hyperbolic;
    p.f = [=](double t) {
      const double other = hyp ? (sine ? std::sinh(t) : std::cosh(t)) : (sine ? std::sin(t) : std::cos(t));
      return std::exp(a * t) * other;
    };
    p.taylor = [=](std::size_t o) {
      return leibniz(exp_derivs(a, o), hyp ? hyp_derivs(1.0, o, sine) : trig_derivs(1.0, o, sine));
    };
    // (+-1)^{n-2k} g^{(n-2k)} with i^{2k} = (-1)^k for the trigonometric rows.
    const ld sign_exp = hyp ? 1 : -1;
    p.transformed = [=](FracOrder b, double t) {
      auto coef = [=](unsigned n) { return sine ? sin_coef(n, sign_exp, a) : cos_coef(n, sign_exp, a); };
      return binomial_series(coef, std::fabs(a) + 1.0, b, t);
    };
    v.push_back(std::move(p));
  }
  return v;
}

void require_positive(const ParamMap& p, std::initializer_list<const char*> keys) {
  for (const char* k : keys)
    if (!(p.at(k) > 0.0)) throw DomainError(std::string("parameter ") + k + " must be positive");
}

FormVariant variant_of(const ParamMap& p) {
  const double v = p.at("printed_form");
  if (v != 0.0 && v != 1.0) throw DomainError("parameter printed_form must be 0 or 1");
  return v == 1.0 ? FormVariant::Printed : FormVariant::Derived;
}

LinearFdeProblem base(std::string label, FracOrder beta, std::vector<double> coeffs, std::vector<double> ics,
                      Forcing forcing = {}) {
  LinearFdeProblem p;
  p.label = std::move(label);
  p.beta = beta;
  p.coefficients = std::move(coeffs);
  p.initial_conditions = std::move(ics);
  p.forcing = forcing;
  return p;
}

std::vector<Preset> make_presets() {
  std::vector<Preset> v;

  v.push_back({"rc", "D^b V + V/(RC) = 0, V(0) = V0", "z' + z/(RC) = 0",
               "RC circuit; V0 E_b(-t^b/(RC))",
               {{"R", 1.0, "resistance"}, {"C", 1.0, "capacitance"}, {"V0", 1.0, "initial voltage"}},
               [](FracOrder b, const ParamMap& p) {
                 require_positive(p, {"R", "C"});
                 const double rc = p.at("R") * p.at("C");
                 const double v0 = p.at("V0");
                 auto prob = base("rc", b, {1.0, 1.0 / rc}, {v0});
                 prob.closed_form = [=](double t) { return v0 * exp_beta(-1.0 / rc, b, t); };
                 return prob;
               }});

  v.push_back({"lc-sin", "D^b D^b V + V/(LC) = 0, V(0) = 0, D^b V(0) = V1",
               "z'' + w^2 z = 0, w = 1/sqrt(LC)", "LC circuit, sine branch; V1 t^b E_{2b,b+1}(-w^2 t^{2b})",
               {{"L", 1.0, "inductance"}, {"C", 1.0, "capacitance"}, {"V1", 1.0, "initial rate"}},
               [](FracOrder b, const ParamMap& p) {
                 require_positive(p, {"L", "C"});
                 const double w = 1.0 / std::sqrt(p.at("L") * p.at("C"));
                 const double v1 = p.at("V1");
                 auto prob = base("lc-sin", b, {0.0, 1.0, w * w}, {0.0, v1});
                 prob.closed_form = [=](double t) { return v1 / w * sin_beta(w, b, t); };
                 return prob;
               }});

  v.push_back({"lc-cos", "D^b D^b V + V/(LC) = 0, V(0) = V0, D^b V(0) = 0",
               "z'' + w^2 z = 0, w = 1/sqrt(LC)", "LC circuit, cosine branch; V0 E_{2b}(-w^2 t^{2b})",
               {{"L", 1.0, "inductance"}, {"C", 1.0, "capacitance"}, {"V0", 1.0, "initial voltage"}},
               [](FracOrder b, const ParamMap& p) {
                 require_positive(p, {"L", "C"});
                 const double w = 1.0 / std::sqrt(p.at("L") * p.at("C"));
                 const double v0 = p.at("V0");
                 auto prob = base("lc-cos", b, {0.0, 1.0, w * w}, {v0, 0.0});
                 prob.closed_form = [=](double t) { return v0 * cos_beta(w, b, t); };
                 return prob;
               }});

  v.push_back({"beam-uniform", "EI (D^b)^4 phi = w0", "EI z'''' = w0, z = w0/(24EI) (s^4 - 2L s^3 + L^2 s^2)",
               "embedded beam under uniform load, defaults L=1, EI=w0",
               {{"EI", 1.0, "flexural rigidity"},
                {"w0", 1.0, "load per length"},
                {"L", 1.0, "beam length"},
                {"printed_form", 0.0, "1: closed form with L^2 t^{2b}/G(2b+1) as printed"}},
               [](FracOrder b, const ParamMap& p) {
                 require_positive(p, {"EI", "L"});
                 const double ei = p.at("EI"), w0 = p.at("w0"), len = p.at("L");
                 const FormVariant fv = variant_of(p);
                 Forcing f{Forcing::Kind::Constant, w0, 0.0};
                 auto prob = base("beam-uniform", b, {0.0, 0.0, 0.0, ei, 0.0},
                                  {0.0, 0.0, w0 * len * len / (12.0 * ei), -w0 * len / (2.0 * ei)}, f);
                 prob.closed_form = [=](double t) { return beam_uniform_load(ei, w0, len, b, t, fv); };
                 return prob;
               }});

  v.push_back({"beam-axial", "EI (D^b)^4 phi + P (D^b)^2 phi = 0, P = EI (n pi/L)^2",
               "EI z'''' + P z'' = 0, z = c1 cos(ks) + c2 sin(ks) + c3 s + c4, k = n pi/L",
               "column under axial load; buckling mode c2 = 1",
               {{"EI", 1.0, "flexural rigidity"},
                {"L", 1.0, "column length"},
                {"mode", 1.0, "buckling mode n"},
                {"c1", 0.0, "cosine coefficient"},
                {"c2", 1.0, "sine coefficient"},
                {"c3", 0.0, "linear coefficient"},
                {"c4", 0.0, "constant"}},
               [](FracOrder b, const ParamMap& p) {
                 require_positive(p, {"EI", "L", "mode"});
                 BeamAxialParams bp;
                 bp.EI = p.at("EI");
                 bp.L = p.at("L");
                 if (p.at("mode") != std::floor(p.at("mode"))) throw DomainError("parameter mode must be an integer");
                 bp.mode = static_cast<int>(p.at("mode"));
                 bp.c1 = p.at("c1");
                 bp.c2 = p.at("c2");
                 bp.c3 = p.at("c3");
                 bp.c4 = p.at("c4");
                 const double k = bp.mode * kPi / bp.L;
                 const double load = bp.EI * k * k;
                 auto prob = base("beam-axial", b, {0.0, load, 0.0, bp.EI, 0.0},
                                  {bp.c1 + bp.c4, bp.c2 * k + bp.c3, -bp.c1 * k * k, -bp.c2 * k * k * k});
                 prob.closed_form = [=](double t) { return beam_axial_load(bp, b, t); };
                 return prob;
               }});

  v.push_back({"nonhom-exp", "D^b y + a y = E_b(t^b), y(0) = y0", "z' + a z = e^t",
               "first-order circuit with exponential source",
               {{"a", 1.0, "decay coefficient"},
                {"y0", 1.0, "initial value"},
                {"printed_form", 0.0, "1: closed form with +E_b(-a t^b)/(a+1) as printed"}},
               [](FracOrder b, const ParamMap& p) {
                 const ParamMap params = p;
                 const FormVariant fv = variant_of(p);
                 const double a = p.at("a");
                 if (a == -1.0) throw DomainError("parameter a = -1 is resonant");
                 auto prob = base("nonhom-exp", b, {1.0, a}, {p.at("y0")}, Forcing{Forcing::Kind::Exp, 1.0, 1.0});
                 prob.closed_form = [=](double t) { return nonhomogeneous_presets("nonhom-exp", params, b, t, fv); };
                 return prob;
               }});

  v.push_back({"nonhom-t2", "D^b D^b y + w^2 y = 2 t^{2b}/G(2b+1)", "z'' + w^2 z = t^2",
               "second-order circuit with quadratic source; c1 = c2 = 1",
               {{"omega", 1.0, "natural frequency"},
                {"c1", 1.0, "cosine coefficient"},
                {"c2", 1.0, "sine coefficient"},
                {"printed_form", 0.0, "1: closed form in (omega t)^{2b} as printed"}},
               [](FracOrder b, const ParamMap& p) {
                 const ParamMap params = p;
                 const FormVariant fv = variant_of(p);
                 const double w = p.at("omega");
                 if (w == 0.0) throw DomainError("parameter omega must be nonzero");
                 const double w2 = w * w;
                 auto prob = base("nonhom-t2", b, {0.0, 1.0, w2}, {p.at("c1") - 2.0 / (w2 * w2), p.at("c2") * w},
                                  Forcing{Forcing::Kind::Power, 1.0, 2.0});
                 prob.closed_form = [=](double t) { return nonhomogeneous_presets("nonhom-t2", params, b, t, fv); };
                 return prob;
               }});

  v.push_back({"nonhom-sin", "D^b D^b y + w^2 y = t^b E_{2b,b+1}(-t^{2b})", "z'' + w^2 z = sin t",
               "second-order circuit with sine source; omega = 2, C1 = C2 = 1",
               {{"omega", 2.0, "natural frequency"}, {"C1", 1.0, "cosine coefficient"}, {"C2", 1.0, "sine coefficient"}},
               [](FracOrder b, const ParamMap& p) {
                 const ParamMap params = p;
                 const double w = p.at("omega");
                 if (w == 0.0) throw DomainError("parameter omega must be nonzero");
                 if (std::fabs(w) == 1.0) throw DomainError("parameter omega = +-1 is resonant");
                 auto prob = base("nonhom-sin", b, {0.0, 1.0, w * w},
                                  {p.at("C1"), p.at("C2") * w + 1.0 / (w * w - 1.0)},
                                  Forcing{Forcing::Kind::Sin, 1.0, 1.0});
                 prob.closed_form = [=](double t) { return nonhomogeneous_presets("nonhom-sin", params, b, t); };
                 return prob;
               }});

  v.push_back({"relax-sin", "D^b y + y = t^b E_{2b,b+1}(-t^{2b}), y(0) = 0", "z' + z = sin t",
               "relaxation with sine source; (sin_b - cos_b + E_b(-t^b))/2",
               {},
               [](FracOrder b, const ParamMap&) {
                 auto prob = base("relax-sin", b, {1.0, 1.0}, {0.0}, Forcing{Forcing::Kind::Sin, 1.0, 1.0});
                 prob.closed_form = [=](double t) {
                   return 0.5 * (sin_beta(1.0, b, t) - cos_beta(1.0, b, t) + exp_beta(-1.0, b, t));
                 };
                 return prob;
               }});

  v.push_back({"third-order", "(D^b)^3 y + 2 (D^b)^2 y + D^b y + 5 y = E_b(-t^b), y(0) = y0",
               "z''' + 2 z'' + z' + 5 z = e^{-t}", "surrogate-network benchmark; no closed form",
               {{"y0", 0.5, "initial value"}},
               [](FracOrder b, const ParamMap& p) {
                 return base("third-order", b, {1.0, 2.0, 1.0, 5.0}, {p.at("y0"), 0.0, 0.0},
                             Forcing{Forcing::Kind::Exp, 1.0, -1.0});
               }});
  return v;
}

double param_or(const ParamMap& p, const char* key, double fallback) {
  const auto it = p.find(key);
  return it == p.end() ? fallback : it->second;
}

}  // namespace

double exp_beta(double r, FracOrder beta, double t) {
  const double x = tau(beta, t);
  return beta.degenerate() ? std::exp(r * x) : ml(beta.value(), 1.0, r * x);
}

double cos_beta(double w, FracOrder beta, double t) {
  const double x = tau(beta, t);
  return beta.degenerate() ? std::cos(w * x) : ml(2.0 * beta.value(), 1.0, -w * w * x * x);
}

double sin_beta(double w, FracOrder beta, double t) {
  const double x = tau(beta, t);
  if (beta.degenerate()) return std::sin(w * x);
  const double b = beta.value();
  return w * x * ml(2.0 * b, b + 1.0, -w * w * x * x);
}

double cosh_beta(double w, FracOrder beta, double t) {
  const double x = tau(beta, t);
  return beta.degenerate() ? std::cosh(w * x) : ml(2.0 * beta.value(), 1.0, w * w * x * x);
}

double sinh_beta(double w, FracOrder beta, double t) {
  const double x = tau(beta, t);
  if (beta.degenerate()) return std::sinh(w * x);
  const double b = beta.value();
  return w * x * ml(2.0 * b, b + 1.0, w * w * x * x);
}

double power_beta(int n, FracOrder beta, double t) {
  if (n < 0) throw DomainError("power_beta: exponent must be >= 0");
  if (n == 0) return 1.0;
  const double x = tau(beta, t);
  if (beta.degenerate()) return std::pow(x, n);
  return std::tgamma(n + 1.0) * std::pow(x, n) * rgamma(n * beta.value() + 1.0);
}

TransformPair power_pair(int n) {
  if (n < 1) throw DomainError("power_pair: exponent must be >= 1");
  return TransformPair{"t^" + std::to_string(n), [n](double t) { return std::pow(t, n); },
                       [n](FracOrder b, double t) { return power_beta(n, b, t); },
                       [n](std::size_t o) { return power_derivs(n, o); }, false};
}

const std::vector<TransformPair>& transform_pairs() {
  static const std::vector<TransformPair> pairs = make_pairs();
  return pairs;
}

const TransformPair& find_pair(std::string_view name) {
  for (const auto& p : transform_pairs())
    if (p.name == name) return p;
  throw DomainError("unknown transform pair: " + std::string(name));
}

double eval_pair(const TransformPair& pair, FracOrder beta, double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("eval_pair: requires finite t >= 0");
  return pair.transformed(beta, t);
}

namespace {

struct Roots {
  enum class Kind { Real, Repeated, Complex } kind;
  double r1 = 0.0, r2 = 0.0;  // real roots, r1 <= r2; repeated root in r1
  double lambda = 0.0, mu = 0.0;
};

Roots classify(double a2, double a1, double a0) {
  if (a2 == 0.0) throw DomainError("second-order problem: a2 must be nonzero");
  const double b = a1 / a2;
  const double c = a0 / a2;
  const double disc = b * b - 4.0 * c;
  Roots r{};
  if (std::fabs(disc) <= 1e-14 * (b * b + 4.0 * std::fabs(c))) {
    r.kind = Roots::Kind::Repeated;
    r.r1 = r.r2 = -0.5 * b;
  } else if (disc > 0.0) {
    r.kind = Roots::Kind::Real;
    const double q = -0.5 * (b + std::copysign(std::sqrt(disc), b == 0.0 ? 1.0 : b));
    const double x = q;
    const double y = c / q;
    r.r1 = std::min(x, y);
    r.r2 = std::max(x, y);
  } else {
    r.kind = Roots::Kind::Complex;
    r.lambda = -0.5 * b;
    r.mu = 0.5 * std::sqrt(-disc);
  }
  return r;
}

}  // namespace

double second_order_homogeneous(double a2, double a1, double a0, double c1, double c2, FracOrder beta, double t) {
  const Roots r = classify(a2, a1, a0);
  switch (r.kind) {
    case Roots::Kind::Real:
      return c2 * exp_beta(r.r2, beta, t) + c1 * exp_beta(r.r1, beta, t);
    case Roots::Kind::Repeated: {
      const double x = tau(beta, t);
      const double d = beta.degenerate() ? x * std::exp(r.r1 * x)
                                         : ml_partial_r(MlParams(beta.value(), 1.0), r.r1, x);
      return c2 * exp_beta(r.r1, beta, t) + c1 * d;
    }
    case Roots::Kind::Complex: {
      if (r.lambda == 0.0) return c1 * cos_beta(r.mu, beta, t) + c2 * sin_beta(r.mu, beta, t);
      const double x = tau(beta, t);
      if (beta.degenerate())
        return std::exp(r.lambda * x) * (c1 * std::cos(r.mu * x) + c2 * std::sin(r.mu * x));
      const std::complex<double> e =
          mittag_leffler(MlParams(beta.value(), 1.0), std::complex<double>(r.lambda * x, r.mu * x));
      return c1 * e.real() + c2 * e.imag();
    }
  }
  return 0.0;
}

RootConstants second_order_constants(double a2, double a1, double a0, double z0, double z1) {
  const Roots r = classify(a2, a1, a0);
  switch (r.kind) {
    case Roots::Kind::Real: {
      const double c2 = (z1 - r.r1 * z0) / (r.r2 - r.r1);
      return {z0 - c2, c2};
    }
    case Roots::Kind::Repeated:
      return {z1 - r.r1 * z0, z0};
    case Roots::Kind::Complex:
      return {z0, (z1 - r.lambda * z0) / r.mu};
  }
  return {0.0, 0.0};
}

double beam_uniform_load(double EI, double w0, double L, FracOrder beta, double t, FormVariant variant) {
  if (!(EI > 0.0) || !(L > 0.0)) throw DomainError("beam: EI and L must be positive");
  const double last = variant == FormVariant::Derived ? 2.0 : 1.0;
  const double x = tau(beta, t);
  const double b = beta.value();
  const double x2 = x * x;
  const double poly = 24.0 * x2 * x2 * rgamma(4.0 * b + 1.0) - 12.0 * L * x2 * x * rgamma(3.0 * b + 1.0) +
                      last * L * L * x2 * rgamma(2.0 * b + 1.0);
  return w0 / (24.0 * EI) * poly;
}

double beam_axial_load(const BeamAxialParams& p, FracOrder beta, double t) {
  if (!(p.EI > 0.0) || !(p.L > 0.0) || p.mode < 1) throw DomainError("beam-axial: EI, L > 0 and mode >= 1");
  const double k = p.mode * kPi / p.L;
  return p.c1 * cos_beta(k, beta, t) + p.c2 * sin_beta(k, beta, t) + p.c3 * power_beta(1, beta, t) + p.c4;
}

double nonhomogeneous_presets(std::string_view name, const ParamMap& params, FracOrder beta, double t,
                              FormVariant variant) {
  if (name == "nonhom-exp") {
    const double a = param_or(params, "a", 1.0);
    const double y0 = param_or(params, "y0", 1.0);
    if (a == -1.0) throw DomainError("nonhom-exp: a = -1 is resonant");
    const double sign = variant == FormVariant::Derived ? -1.0 : 1.0;
    const double decay = exp_beta(-a, beta, t);
    return exp_beta(1.0, beta, t) / (a + 1.0) + sign * decay / (a + 1.0) + y0 * decay;
  }
  if (name == "nonhom-t2") {
    const double w = param_or(params, "omega", 1.0);
    const double c1 = param_or(params, "c1", 1.0);
    const double c2 = param_or(params, "c2", 1.0);
    if (w == 0.0) throw DomainError("nonhom-t2: omega must be nonzero");
    const double w2 = w * w;
    const double particular = power_beta(2, beta, t) / w2 - 2.0 / (w2 * w2);
    if (variant == FormVariant::Derived)
      return c1 * cos_beta(w, beta, t) + c2 * sin_beta(w, beta, t) + particular;
    // (omega t)^{2b} read literally: E_{2b}(-w^{2b} t^{2b}) and (w t)^b E_{2b,b+1}(...).
    const double wb = std::pow(std::fabs(w), beta.value());
    const double x = tau(beta, t);
    const double b = beta.value();
    const double arg = -(wb * x) * (wb * x);
    const double cos_part = beta.degenerate() ? std::cos(w * x) : ml(2.0 * b, 1.0, arg);
    const double sin_part = beta.degenerate() ? std::sin(w * x) : wb * x * ml(2.0 * b, b + 1.0, arg);
    return c1 * cos_part + c2 * sin_part + particular;
  }
  if (name == "nonhom-sin") {
    const double w = param_or(params, "omega", 2.0);
    const double c1 = param_or(params, "C1", 1.0);
    const double c2 = param_or(params, "C2", 1.0);
    if (std::fabs(w) == 1.0) throw DomainError("nonhom-sin: omega = +-1 is resonant");
    return c1 * cos_beta(w, beta, t) + c2 * sin_beta(w, beta, t) + sin_beta(1.0, beta, t) / (w * w - 1.0);
  }
  throw DomainError("unknown nonhomogeneous preset: " + std::string(name));
}

const std::vector<Preset>& presets() {
  static const std::vector<Preset> all = make_presets();
  return all;
}

const Preset& find_preset(std::string_view name) {
  for (const auto& p : presets())
    if (p.name == name) return p;
  throw DomainError("unknown preset: " + std::string(name));
}

ParamMap resolve_params(const Preset& preset, const ParamMap& overrides) {
  ParamMap out;
  for (const auto& d : preset.defaults) out[d.name] = d.value;
  for (const auto& [k, val] : overrides) {
    if (!out.contains(k)) throw DomainError("preset " + preset.name + " has no parameter '" + k + "'");
    if (!std::isfinite(val)) throw DomainError("parameter " + k + " must be finite");
    out[k] = val;
  }
  return out;
}

}  // namespace fracmc
