#pragma once

// Closed-form transform pairs f -> f_beta and preset problems with known
// solutions y_beta(t) = E[z(T_beta(t))].

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fracmc/problem.hpp"
#include "fracmc/specfun.hpp"

namespace fracmc {

// f_beta for the elementary building blocks; each reduces to the classical
// function at beta = 1.
[[nodiscard]] double exp_beta(double r, FracOrder beta, double t);    // E_beta(r t^beta)
[[nodiscard]] double cos_beta(double w, FracOrder beta, double t);    // transform of cos(w s)
[[nodiscard]] double sin_beta(double w, FracOrder beta, double t);    // transform of sin(w s)
[[nodiscard]] double cosh_beta(double w, FracOrder beta, double t);   // transform of cosh(w s)
[[nodiscard]] double sinh_beta(double w, FracOrder beta, double t);   // transform of sinh(w s)
[[nodiscard]] double power_beta(int n, FracOrder beta, double t);     // transform of s^n

struct TransformPair {
  std::string name;
  /// f(t) on the ODE side.
  std::function<double(double)> f;
  /// f_beta(t) from the tabulated formula.
  std::function<double(FracOrder, double)> transformed;
  /// f^{(n)}(0) for n = 0..order, by the general Leibniz rule on the factors.
  std::function<std::vector<double>(std::size_t order)> taylor;
  /// True for rows whose tabulated form is a binomial coefficient sum.
  bool binomial = false;
};

/// The sixteen tabulated rows (t^n with n = 3, g(t) = exp(t/2) in the g-rows).
[[nodiscard]] const std::vector<TransformPair>& transform_pairs();
[[nodiscard]] const TransformPair& find_pair(std::string_view name);
[[nodiscard]] TransformPair power_pair(int n);

[[nodiscard]] double eval_pair(const TransformPair& pair, FracOrder beta, double t);

/// a2 (D^b)^2 y + a1 D^b y + a0 y = 0 by the root cases of the characteristic
/// polynomial. Real roots r1 <= r2: c2 E(r2 tau) + c1 E(r1 tau); repeated root:
/// c2 E(r tau) + c1 dE/dr(r tau); complex r = l +- i m (m > 0): the real
/// solution Re[(c1 - i c2) E(r2 tau)], which is e^{l t}(c1 cos m t + c2 sin m t)
/// at beta = 1.
[[nodiscard]] double second_order_homogeneous(double a2, double a1, double a0, double c1, double c2,
                                              FracOrder beta, double t);

/// Constants (c1, c2) of second_order_homogeneous matching z(0) = z0, z'(0) = z1.
struct RootConstants {
  double c1;
  double c2;
};
[[nodiscard]] RootConstants second_order_constants(double a2, double a1, double a0, double z0, double z1);

/// Which form of a published closed form to evaluate: the transform of the
/// classical solution, or the expression as printed.
enum class FormVariant { Derived, Printed };

/// Transform of (w0/24EI)(s^4 - 2 L s^3 + L^2 s^2):
/// (w0/24EI)(24 t^{4b}/G(4b+1) - 12 L t^{3b}/G(3b+1) + 2 L^2 t^{2b}/G(2b+1)).
/// The printed variant carries L^2 t^{2b}/G(2b+1) in the last term.
[[nodiscard]] double beam_uniform_load(double EI, double w0, double L, FracOrder beta, double t,
                                       FormVariant variant = FormVariant::Derived);

struct BeamAxialParams {
  double EI = 1.0;
  double L = 1.0;
  int mode = 1;  // k = mode * pi / L, P = EI k^2
  double c1 = 0.0;
  double c2 = 1.0;
  double c3 = 0.0;
  double c4 = 0.0;
};
/// c1 cos_b(k) + c2 sin_b(k) + c3 t^b/G(b+1) + c4.
[[nodiscard]] double beam_axial_load(const BeamAxialParams& p, FracOrder beta, double t);

/// Forced examples by name: "nonhom-exp" (a, y0), "nonhom-t2" (omega, c1, c2),
/// "nonhom-sin" (omega, C1, C2). Missing parameters take the preset defaults.
/// The printed variant of "nonhom-exp" adds E_b(-a t^b)/(a+1) instead of
/// subtracting it; that of "nonhom-t2" uses (omega t)^{2b} in place of
/// omega^2 t^{2b}.
[[nodiscard]] double nonhomogeneous_presets(std::string_view name, const ParamMap& params, FracOrder beta,
                                            double t, FormVariant variant = FormVariant::Derived);

struct PresetParam {
  std::string name;
  double value;
  std::string description;
};

struct Preset {
  std::string name;
  std::string equation;
  std::string ode;
  std::string reference;
  std::vector<PresetParam> defaults;
  /// Builds the problem; unknown keys in `params` are rejected.
  std::function<LinearFdeProblem(FracOrder, const ParamMap&)> build;
};

[[nodiscard]] const std::vector<Preset>& presets();
[[nodiscard]] const Preset& find_preset(std::string_view name);
/// Defaults overlaid with `overrides`; throws DomainError on unknown keys.
[[nodiscard]] ParamMap resolve_params(const Preset& preset, const ParamMap& overrides);

}  // namespace fracmc
