#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "fraclane/errors.hpp"
#include "fraclane/ground_state.hpp"
#include "fraclane/oracle.hpp"
#include "fraclane/params.hpp"
#include "fraclane/report.hpp"
#include "fraclane/spectrum.hpp"

namespace py = pybind11;
using namespace fraclane;

namespace {

std::vector<double> radial_profile(const SectorFunction& f, const std::vector<double>& r) {
  std::vector<double> out;
  out.reserve(r.size());
  for (double x : r) out.push_back(f.radial(x));
  return out;
}

// JSON crosses the boundary as text; the Python side decodes it.
std::string run_json(const std::string& config) { return run(parse_config(config)).to_json().dump(); }
std::string sweep_json(const std::string& config) { return sweep(parse_config(config)).to_json().dump(); }

}  // namespace

PYBIND11_MODULE(_fraclane, m) {
  auto base = py::register_exception<Error>(m, "Error");
  py::register_exception<InvalidArgument>(m, "InvalidArgument", base.ptr());
  py::register_exception<CoercivityError>(m, "CoercivityError", base.ptr());
  py::register_exception<ConvergenceError>(m, "ConvergenceError", base.ptr());
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

  py::class_<FracParams>(m, "FracParams")
      .def_property_readonly("N", &FracParams::N)
      .def_property_readonly("s", &FracParams::s)
      .def_property_readonly("p", &FracParams::p)
      .def_property_readonly("lam", &FracParams::lambda)
      .def_property_readonly("R", &FracParams::R)
      .def_property_readonly("critical_exponent", &FracParams::critical_exponent)
      .def("with_lambda", &FracParams::with_lambda)
      .def("__repr__", [](const FracParams& p) {
        return "FracParams(N=" + std::to_string(p.N()) + ", s=" + std::to_string(p.s()) +
               ", p=" + std::to_string(p.p()) + ", lam=" + std::to_string(p.lambda()) +
               ", R=" + std::to_string(p.R()) + ")";
      });

  m.def("make_params", &make_params, py::arg("N"), py::arg("s"), py::arg("p"), py::arg("lam") = 0.0,
        py::arg("R") = 1.0);
  m.def("cns_constant", &cns_constant, py::arg("N"), py::arg("s"));
  m.def(
      "first_eigenvalue", [](const FracParams& p, int modes) { return first_eigenvalue(p, modes).lambda1; },
      py::arg("params"), py::arg("modes") = 32);

  py::class_<GroundState, std::shared_ptr<GroundState>>(m, "GroundState")
      .def_readonly("params", &GroundState::params)
      .def_readonly("m", &GroundState::m)
      .def_readonly("lambda1", &GroundState::lambda1)
      .def_readonly("residual", &GroundState::residual)
      .def_readonly("trace", &GroundState::trace)
      .def_readonly("positive", &GroundState::positive)
      .def_readonly("monotone", &GroundState::monotone)
      .def_readonly("iterations", &GroundState::iterations)
      .def_property_readonly("coefficients",
                             [](const GroundState& g) {
                               const auto& c = g.u.coeffs();
                               return std::vector<double>(c.data(), c.data() + c.size());
                             })
      .def("profile", [](const GroundState& g, const std::vector<double>& r) { return radial_profile(g.u, r); });

  m.def(
      "ground_state",
      [](const FracParams& p, int modes) { return std::make_shared<GroundState>(ground_state(p, modes)); },
      py::arg("params"), py::arg("modes") = 32);

  py::class_<SpectrumEntry>(m, "SpectrumEntry")
      .def_readonly("mu", &SpectrumEntry::mu)
      .def_readonly("ell", &SpectrumEntry::ell)
      .def_readonly("index", &SpectrumEntry::index)
      .def_readonly("multiplicity", &SpectrumEntry::multiplicity)
      .def("profile", [](const SpectrumEntry& e, const std::vector<double>& r) { return radial_profile(e.v, r); });

  py::class_<SpectrumResult>(m, "SpectrumResult")
      .def_readonly("entries", &SpectrumResult::entries)
      .def_readonly("morse_index", &SpectrumResult::morse_index)
      .def_readonly("mu1", &SpectrumResult::mu1)
      .def_readonly("mu2", &SpectrumResult::mu2)
      .def_readonly("mu2_ell", &SpectrumResult::mu2_ell)
      .def_readonly("gap", &SpectrumResult::gap)
      .def_readonly("refinement_delta", &SpectrumResult::refinement_delta);

  m.def(
      "full_spectrum",
      [](const GroundState& g, int ell_max, bool refine) {
        SpectrumOptions o;
        o.ell_max = ell_max;
        o.refine = refine;
        return full_spectrum(g, o);
      },
      py::arg("ground"), py::arg("ell_max") = 4, py::arg("refine") = true);

  m.def(
      "oracle_image",
      [](const GroundState& g, const std::vector<double>& x) {
        const OracleResult r = quadrature_oracle(Field(g.u), x);
        return py::make_tuple(r.value, r.error);
      },
      py::arg("ground"), py::arg("x"));

  m.def("_run_json", &run_json, py::call_guard<py::gil_scoped_release>());
  m.def("_sweep_json", &sweep_json, py::call_guard<py::gil_scoped_release>());
}
