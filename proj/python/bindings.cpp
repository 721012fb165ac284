#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "fracmc/catalog.hpp"
#include "fracmc/errors.hpp"
#include "fracmc/mcsolver.hpp"
#include "fracmc/specfun.hpp"
#include "fracmc/subordinator.hpp"

namespace py = pybind11;
using namespace fracmc;

namespace {

py::dict solve_preset(const std::string& name, double beta, double t_max, std::size_t points, std::size_t m,
                      std::uint64_t seed, const ParamMap& params, bool coupled) {
  const Preset& p = find_preset(name);
  const LinearFdeProblem prob = p.build(FracOrder(beta), resolve_params(p, params));
  const TimeGrid grid = TimeGrid::uniform(t_max, points);
  const auto mc = solve_mc(prob, grid, m, seed, {coupled, 1, {}});
  std::vector<double> t, mean, se;
  for (const auto& e : mc) {
    t.push_back(e.t);
    mean.push_back(e.mean);
    se.push_back(e.std_error);
  }
  py::dict out;
  out["t"] = t;
  out["mc_mean"] = mean;
  out["mc_stderr"] = se;
  if (const auto cf = solve_closed_form(prob, grid)) out["closed_form"] = *cf;
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Monte Carlo solvers for linear Caputo fractional ODEs";
  m.attr("__version__") = FRACMC_VERSION;

  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      if (e.numerical()) PyErr_SetString(PyExc_ArithmeticError, e.what());
      else PyErr_SetString(PyExc_ValueError, e.what());
    }
  });

  m.def(
      "mittag_leffler", [](double beta, double alpha, double z) { return mittag_leffler(MlParams(beta, alpha), z); },
      py::arg("beta"), py::arg("alpha"), py::arg("z"));
  m.def(
      "g_density", [](double beta, double x, double t) { return g_density(FracOrder(beta), x, t); }, py::arg("beta"),
      py::arg("x"), py::arg("t"));
  m.def(
      "sample_inverse_time",
      [](double beta, double t, std::size_t count, std::uint64_t seed) {
        RngStream rng(seed, 0);
        return sample_batch(FracOrder(beta), t, count, rng).samples;
      },
      py::arg("beta"), py::arg("t"), py::arg("m"), py::arg("seed") = 42);
  m.def(
      "eval_pair", [](const std::string& name, double beta, double t) { return eval_pair(find_pair(name), FracOrder(beta), t); },
      py::arg("name"), py::arg("beta"), py::arg("t"));
  m.def("preset_names", [] {
    std::vector<std::string> names;
    for (const auto& p : presets()) names.push_back(p.name);
    return names;
  });
  m.def("solve_preset", &solve_preset, py::arg("name"), py::arg("beta"), py::arg("t_max") = 5.0,
        py::arg("points") = 50, py::arg("m") = 10000, py::arg("seed") = 42, py::arg("params") = ParamMap{},
        py::arg("coupled") = false);
}
