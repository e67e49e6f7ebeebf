#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "lbt/greens.hpp"
#include "lbt/oracle.hpp"
#include "lbt/runner.hpp"
#include "lbt/transport.hpp"

namespace py = pybind11;
using namespace lbt;

PYBIND11_MODULE(_lbt, m) {
  m.doc() = "Keldysh and master-equation currents for driven tight-binding chains";
  m.attr("__version__") = LBT_VERSION;

  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<quad::NonConvergence>(m, "NonConvergence", PyExc_RuntimeError);
  py::register_exception<greens::OnShellSingularity>(m, "OnShellSingularity", PyExc_ArithmeticError);
  py::register_exception<oracle::DegenerateSteadyState>(m, "DegenerateSteadyState", PyExc_RuntimeError);

  py::enum_<BulkKind>(m, "BulkKind")
      .value("NONE", BulkKind::None)
      .value("LOSS", BulkKind::Loss)
      .value("GAIN", BulkKind::Gain);

  py::class_<LindbladReservoir>(m, "LindbladReservoir")
      .def(py::init([](double alpha, double beta) { return LindbladReservoir::make(alpha, beta); }), py::arg("alpha"),
           py::arg("beta"))
      .def_readwrite("alpha", &LindbladReservoir::alpha)
      .def_readwrite("beta", &LindbladReservoir::beta)
      .def_property_readonly("width", &LindbladReservoir::width)
      .def("__repr__", [](const LindbladReservoir& r) {
        return "LindbladReservoir(alpha=" + std::to_string(r.alpha) + ", beta=" + std::to_string(r.beta) + ")";
      });

  py::class_<FermionicReservoir>(m, "FermionicReservoir")
      .def(py::init([](double delta, double mu, double t) { return FermionicReservoir::make(delta, mu, t); }),
           py::arg("delta"), py::arg("mu") = 0.0, py::arg("temperature") = 0.0)
      .def_readwrite("delta", &FermionicReservoir::delta)
      .def_readwrite("mu", &FermionicReservoir::mu)
      .def_readwrite("temperature", &FermionicReservoir::temperature);

  py::class_<LindbladDrive>(m, "LindbladDrive")
      .def(py::init<LindbladReservoir, LindbladReservoir>(), py::arg("left"), py::arg("right"))
      .def_readwrite("left", &LindbladDrive::left)
      .def_readwrite("right", &LindbladDrive::right);

  py::class_<FermionicDrive>(m, "FermionicDrive")
      .def(py::init<FermionicReservoir, FermionicReservoir>(), py::arg("left"), py::arg("right"))
      .def_readwrite("left", &FermionicDrive::left)
      .def_readwrite("right", &FermionicDrive::right);

  py::class_<ChainModel>(m, "ChainModel")
      .def(py::init([](int n, double hopping, double eps0, BulkKind kind, double rate) {
             ChainModel c = ChainModel::uniform(n, hopping, eps0);
             c.bulk_kind = kind;
             c.bulk_rate = rate;
             require(validate(c));
             return c;
           }),
           py::arg("n_sites"), py::arg("hopping") = 1.0, py::arg("eps0") = 0.0, py::arg("bulk_kind") = BulkKind::None,
           py::arg("bulk_rate") = 0.0)
      .def_readwrite("n_sites", &ChainModel::n_sites)
      .def_readwrite("hopping", &ChainModel::hopping)
      .def_readwrite("onsite", &ChainModel::onsite)
      .def_readwrite("bulk_rate", &ChainModel::bulk_rate)
      .def_readwrite("bulk_kind", &ChainModel::bulk_kind);

  py::class_<QuadratureSpec>(m, "QuadratureSpec")
      .def(py::init([](double rel, double abs, int max_sub) { return QuadratureSpec{rel, abs, max_sub, std::nullopt}; }),
           py::arg("rel_tol") = 1e-9, py::arg("abs_tol") = 1e-12, py::arg("max_subdivisions") = 2000)
      .def_readwrite("rel_tol", &QuadratureSpec::rel_tol)
      .def_readwrite("abs_tol", &QuadratureSpec::abs_tol)
      .def_readwrite("max_subdivisions", &QuadratureSpec::max_subdivisions)
      .def_readwrite("window", &QuadratureSpec::window);

  py::class_<transport::CurrentResult>(m, "CurrentResult")
      .def_readonly("j_left", &transport::CurrentResult::j_left)
      .def_readonly("j_right", &transport::CurrentResult::j_right)
      .def_readonly("j_through", &transport::CurrentResult::j_through)
      .def_readonly("j_dissipative", &transport::CurrentResult::j_dissipative)
      .def("__repr__", [](const transport::CurrentResult& c) {
        return "CurrentResult(j_through=" + config::format_number(c.j_through) +
               ", j_dissipative=" + config::format_number(c.j_dissipative) + ")";
      });

  const QuadratureSpec q;
  m.def("occupation_lindblad", &transport::occupation_lindblad, py::arg("reservoir"));
  m.def("occupation_fermionic", &transport::occupation_fermionic, py::arg("reservoir"), py::arg("eps0"),
        py::arg("quad") = q);
  m.def("map_fermionic_to_lindblad", &transport::map_fermionic_to_lindblad, py::arg("reservoir"));
  m.def("current_lindblad", &transport::current_lindblad_generic, py::arg("model"), py::arg("drive"),
        py::arg("quad") = q, "Generic Keldysh currents; bulk loss or gain allowed.");
  m.def("current_free_lindblad", &transport::current_free_lindblad, py::arg("model"), py::arg("drive"),
        py::arg("quad") = q);
  m.def(
      "current_dissipative_chain",
      [](const ChainModel& model, const LindbladDrive& drive, const QuadratureSpec& quad) {
        const auto r = transport::current_dissipative_chain(model, drive, quad);
        return py::make_tuple(r.current, r.generic_path);
      },
      py::arg("model"), py::arg("drive"), py::arg("quad") = q,
      "Returns (CurrentResult, generic_path) for a uniform chain with bulk loss or gain.");
  m.def("current_meir_wingreen", &transport::current_meir_wingreen, py::arg("model"), py::arg("drive"),
        py::arg("quad") = q);
  m.def("current_landauer", &transport::current_free_fermionic, py::arg("model"), py::arg("drive"),
        py::arg("quad") = q);
  m.def(
      "transmission",
      [](const ChainModel& model, double delta_left, double delta_right, double eps) {
        return transport::transmission(model, {delta_left, delta_right}, eps);
      },
      py::arg("model"), py::arg("delta_left"), py::arg("delta_right"), py::arg("eps"));
  m.def("conductance_high_t", &transport::conductance_high_t, py::arg("model"), py::arg("delta"),
        py::arg("temperature"), py::arg("quad") = q);
  m.def("conductance_finite_t", &transport::conductance_finite_t, py::arg("model"), py::arg("drive"),
        py::arg("quad") = q);
  m.def("bounding_current", &transport::bounding_current, py::arg("power"), py::arg("drive"), py::arg("quad") = q);

  m.def(
      "retarded",
      [](const ChainModel& model, const LindbladDrive& drive, double eps) {
        return greens::retarded(model, Drive{drive}, eps);
      },
      py::arg("model"), py::arg("drive"), py::arg("eps"), "Dense retarded Green function at energy eps.");
  m.def(
      "keldysh",
      [](const ChainModel& model, const LindbladDrive& drive, double eps) {
        return greens::green_set(model, drive, eps).g_k;
      },
      py::arg("model"), py::arg("drive"), py::arg("eps"));

  py::class_<oracle::SteadyState>(m, "SteadyState")
      .def_readonly("rho", &oracle::SteadyState::rho)
      .def_readonly("occupations", &oracle::SteadyState::occupations)
      .def_readonly("currents", &oracle::SteadyState::currents)
      .def_readonly("conservation_defect", &oracle::SteadyState::conservation_defect)
      .def_readonly("residual", &oracle::SteadyState::residual);
  m.def("oracle_steady_state", &oracle::solve, py::arg("model"), py::arg("drive"),
        "Exact steady state of the master equation (at most 4 sites).");
  m.attr("ORACLE_MAX_SITES") = oracle::kMaxSites;
}
