#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cmath>

#include "singosc/errors.hpp"
#include "singosc/model.hpp"
#include "singosc/oracle.hpp"
#include "singosc/special.hpp"
#include "singosc/spectrum.hpp"
#include "singosc/verify.hpp"
#include "singosc/wavefn.hpp"

namespace py = pybind11;
using namespace singosc;

namespace {

ExtensionParameter to_tau(double tau) {
  return std::isinf(tau) ? ExtensionParameter::infinity() : ExtensionParameter::finite(tau);
}

double from_tau(const ExtensionParameter& tau) { return tau.is_infinite() ? HUGE_VAL : tau.value(); }

PhysicalParams make_params(double m, double v0, double g, int l) {
  PhysicalParams p;
  p.m = m;
  p.v0 = v0;
  p.g = g;
  p.l = l;
  return p;
}

}  // namespace

PYBIND11_MODULE(_core, mod) {
  mod.doc() = "Spectra and eigenfunctions of the singular oscillator V = -V0/r^2 + g r^2";

  auto error = py::register_exception<Error>(mod, "Error", PyExc_RuntimeError);
  py::register_exception<FallToCenterError>(mod, "FallToCenterError", error);
  py::register_exception<RegimeError>(mod, "RegimeError", error);
  py::register_exception<DomainError>(mod, "DomainError", error);
  py::register_exception<PoleError>(mod, "PoleError", error);

  py::enum_<Regime>(mod, "Regime")
      .value("Regular", Regime::Regular)
      .value("SaeRequired", Regime::SaeRequired)
      .value("FallToCenter", Regime::FallToCenter);
  py::enum_<Branch>(mod, "Branch")
      .value("Standard", Branch::Standard)
      .value("Additional", Branch::Additional)
      .value("GenericTau", Branch::GenericTau);

  py::class_<PhysicalParams>(mod, "PhysicalParams")
      .def(py::init(&make_params), py::arg("m") = 0.5, py::arg("v0") = 0.0, py::arg("g") = 1.0, py::arg("l") = 0)
      .def_readwrite("m", &PhysicalParams::m)
      .def_readwrite("v0", &PhysicalParams::v0)
      .def_readwrite("g", &PhysicalParams::g)
      .def_readwrite("l", &PhysicalParams::l)
      .def("validate", &PhysicalParams::validate);

  py::class_<DerivedParams>(mod, "DerivedParams")
      .def_readonly("params", &DerivedParams::params)
      .def_readonly("P", &DerivedParams::P)
      .def_readonly("s", &DerivedParams::s)
      .def_readonly("omega", &DerivedParams::omega)
      .def_readonly("kappa_scale", &DerivedParams::kappa_scale)
      .def_readonly("defect", &DerivedParams::defect)
      .def_readonly("regime", &DerivedParams::regime);

  py::class_<EnergyLevel>(mod, "EnergyLevel")
      .def_readonly("n_r", &EnergyLevel::n_r)
      .def_readonly("energy", &EnergyLevel::energy)
      .def_readonly("branch", &EnergyLevel::branch);

  py::class_<Bracket>(mod, "Bracket").def_readonly("lo", &Bracket::lo).def_readonly("hi", &Bracket::hi);

  py::class_<SpectrumResult>(mod, "SpectrumResult")
      .def_readonly("levels", &SpectrumResult::levels)
      .def_readonly("brackets", &SpectrumResult::brackets)
      .def_readonly("physicality_warning", &SpectrumResult::physicality_warning);

  mod.def("classify", &classify, py::arg("params"));
  mod.def("derive", &derive, py::arg("params"));
  mod.def("standard_level", &standard_level, py::arg("derived"), py::arg("n_r"));
  mod.def("additional_level", &additional_level, py::arg("derived"), py::arg("n_r"));
  mod.def("f_p", &f_p, py::arg("energy"), py::arg("derived"));
  mod.def("equidistance_ratio", &equidistance_ratio, py::arg("energy"), py::arg("derived"));
  mod.def("tau_lower_bound", &tau_lower_bound, py::arg("derived"));
  mod.def(
      "eigenvalue_rhs", [](double tau, const DerivedParams& d) { return eigenvalue_rhs(to_tau(tau), d); },
      py::arg("tau"), py::arg("derived"));
  mod.def(
      "solve_spectrum",
      [](const DerivedParams& d, double tau, int count) {
        return solve_spectrum(SpectralProblem::make(d, to_tau(tau)), count);
      },
      py::arg("derived"), py::arg("tau"), py::arg("count"),
      "Lowest `count` levels; tau = math.inf selects the additional branch.");
  mod.def(
      "negative_level_exists",
      [](const DerivedParams& d, double tau) { return negative_level_exists(SpectralProblem::make(d, to_tau(tau))); },
      py::arg("derived"), py::arg("tau"));

  py::class_<RadialWavefunction>(mod, "RadialWavefunction")
      .def_property_readonly("tau", [](const RadialWavefunction& w) { return from_tau(w.tau); })
      .def_readonly("branch", &RadialWavefunction::branch)
      .def_readonly("n_r", &RadialWavefunction::n_r)
      .def_readonly("energy", &RadialWavefunction::energy)
      .def_readonly("n_eff", &RadialWavefunction::n_eff)
      .def_readonly("c_coeff", &RadialWavefunction::c_coeff)
      .def_readonly("d_coeff", &RadialWavefunction::d_coeff)
      .def("eval_general", &eval_general, py::arg("r"))
      .def("eval_unified", &eval_unified, py::arg("r"))
      .def("eval_whittaker", &eval_whittaker, py::arg("r"));

  mod.def(
      "wavefunction",
      [](const DerivedParams& d, double tau, int n_r) {
        const SpectralProblem prob = SpectralProblem::make(d, to_tau(tau));
        const SpectrumResult res = solve_spectrum(prob, n_r + 1);
        return normalized(build_wavefunction(prob, res.levels[n_r]));
      },
      py::arg("derived"), py::arg("tau"), py::arg("n_r"), "Normalized eigenfunction of level n_r.");
  mod.def("normalization_constant", &normalization_constant, py::arg("wavefunction"));
  mod.def("quadrature_norm", &quadrature_norm, py::arg("wavefunction"));

  mod.def(
      "shoot_eigenvalue",
      [](const DerivedParams& d, double tau, double lo, double hi) {
        const SpectralProblem prob = SpectralProblem::make(d, to_tau(tau));
        return shoot_eigenvalue(prob, Bracket{lo, hi}, RadialGrid::default_for(d));
      },
      py::arg("derived"), py::arg("tau"), py::arg("lo"), py::arg("hi"),
      "Numerov shooting eigenvalue inside [lo, hi] on the default grid.");

  mod.def("gamma", &special::gamma, py::arg("x"));
  mod.def("digamma", &special::digamma, py::arg("x"));
  mod.def("kummer_m", py::overload_cast<double, double, double>(&special::kummer_m), py::arg("a"), py::arg("b"),
          py::arg("x"));
  mod.def("tricomi_u", &special::tricomi_u, py::arg("a"), py::arg("b"), py::arg("x"));
  mod.def("whittaker_w", &special::whittaker_w, py::arg("k"), py::arg("mu"), py::arg("x"));

  py::class_<CheckResult>(mod, "CheckResult")
      .def_readonly("id", &CheckResult::id)
      .def_readonly("name", &CheckResult::name)
      .def_readonly("passed", &CheckResult::passed)
      .def_readonly("detail", &CheckResult::detail)
      .def_readonly("seconds", &CheckResult::seconds);
  mod.def("check_names", &check_names);
  mod.def(
      "run_verification",
      [](std::vector<std::string> only, double tolerance_scale) {
        VerifyOptions opt;
        opt.only = std::move(only);
        opt.tolerance_scale = tolerance_scale;
        return run_verification(opt);
      },
      py::arg("only") = std::vector<std::string>{}, py::arg("tolerance_scale") = 1.0);
}
