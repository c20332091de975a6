#include "fdoe/basis.hpp"
#include "fdoe/criteria.hpp"
#include "fdoe/errors.hpp"
#include "fdoe/model.hpp"
#include "fdoe/optimizer.hpp"
#include "fdoe/oracle.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>

namespace py = pybind11;
using namespace fdoe;

namespace {

std::optional<double> to_optional(const CriterionValue& v) {
  if (!v.is_feasible()) {
    return std::nullopt;
  }
  return v.raw();
}

}  // namespace

PYBIND11_MODULE(_fdoe, m) {
  m.doc() = "A-optimal designs for scalar-on-function linear models";

  py::register_exception<IdentifiabilityError>(m, "IdentifiabilityError", PyExc_ValueError);
  py::register_exception<InfeasibleDesignError>(m, "InfeasibleDesignError", PyExc_RuntimeError);

  m.def("make_uniform_grid",
        [](double lower, double upper, int n) { return make_uniform_grid(lower, upper, n).points(); },
        py::arg("lower"), py::arg("upper"), py::arg("n_intervals"));

  py::enum_<BasisKind>(m, "BasisKind")
      .value("Step", BasisKind::Step)
      .value("BSpline1", BasisKind::BSpline1)
      .value("Power", BasisKind::Power);

  py::class_<BasisSystem>(m, "Basis")
      .def_static("step", [](std::vector<double> pts) { return BasisSystem::step(BreakpointGrid(std::move(pts))); },
                  py::arg("breakpoints"))
      .def_static("bspline1", [](std::vector<double> pts) { return BasisSystem::bspline1(BreakpointGrid(std::move(pts))); },
                  py::arg("knots"))
      .def_static("power", &BasisSystem::power, py::arg("degree"), py::arg("lower") = 0.0,
                  py::arg("upper") = 1.0)
      .def_static("uniform_step", &BasisSystem::uniform_step, py::arg("size"),
                  py::arg("lower") = 0.0, py::arg("upper") = 1.0)
      .def_static("uniform_bspline1", &BasisSystem::uniform_bspline1, py::arg("size"),
                  py::arg("lower") = 0.0, py::arg("upper") = 1.0)
      .def_property_readonly("kind", &BasisSystem::kind)
      .def_property_readonly("size", &BasisSystem::size)
      .def_property_readonly("degree", &BasisSystem::degree)
      .def_property_readonly("lower", &BasisSystem::lower)
      .def_property_readonly("upper", &BasisSystem::upper)
      .def_property_readonly("knots", &BasisSystem::knots)
      .def("__repr__", [](const BasisSystem& b) {
        return "<Basis " + std::string(to_string(b.kind())) + " size=" + std::to_string(b.size()) + ">";
      });

  m.def("eval_basis", &eval_basis, py::arg("basis"), py::arg("t"));
  m.def("cross_integral", &cross_integral, py::arg("x_basis"), py::arg("beta_basis"));
  m.def("quad_cross_integral",
        [](const BasisSystem& x, const BasisSystem& b, int panels) {
          return oracle::quad_cross_integral(x, b, oracle::QuadratureRule{panels});
        },
        py::arg("x_basis"), py::arg("beta_basis"), py::arg("panels") = 10000);

  py::class_<Bounds>(m, "Bounds")
      .def(py::init<double, double>(), py::arg("lower") = -1.0, py::arg("upper") = 1.0)
      .def_readwrite("lower", &Bounds::lower)
      .def_readwrite("upper", &Bounds::upper);

  py::enum_<ScalarEffects>(m, "ScalarEffects")
      .value("MainOnly", ScalarEffects::MainOnly)
      .value("MainPlusQuadratic", ScalarEffects::MainPlusQuadratic);

  py::class_<ProfileFactorSpec>(m, "ProfileFactor")
      .def(py::init([](BasisSystem x, BasisSystem beta, Bounds bounds) {
             return ProfileFactorSpec{std::move(x), std::move(beta), bounds};
           }),
           py::arg("x_basis"), py::arg("beta_basis"), py::arg("bounds") = Bounds{})
      .def_readwrite("x_basis", &ProfileFactorSpec::x_basis)
      .def_readwrite("beta_basis", &ProfileFactorSpec::beta_basis)
      .def_readwrite("bounds", &ProfileFactorSpec::bounds);

  py::class_<ScalarFactorSpec>(m, "ScalarFactor")
      .def(py::init([](Bounds bounds, ScalarEffects effects) { return ScalarFactorSpec{bounds, effects}; }),
           py::arg("bounds") = Bounds{}, py::arg("effects") = ScalarEffects::MainOnly)
      .def_readwrite("bounds", &ScalarFactorSpec::bounds)
      .def_readwrite("effects", &ScalarFactorSpec::effects);

  py::class_<ProblemSpec>(m, "ProblemSpec")
      .def(py::init([](int runs, std::vector<ProfileFactorSpec> profile, std::vector<ScalarFactorSpec> scalar) {
             return ProblemSpec{runs, std::move(profile), std::move(scalar)};
           }),
           py::arg("runs"), py::arg("profile") = std::vector<ProfileFactorSpec>{},
           py::arg("scalar") = std::vector<ScalarFactorSpec>{})
      .def_readwrite("runs", &ProblemSpec::runs)
      .def_readwrite("profile", &ProblemSpec::profile)
      .def_readwrite("scalar", &ProblemSpec::scalar)
      .def_property_readonly("parameter_count", &ProblemSpec::parameter_count)
      .def("validate", &ProblemSpec::validate);

  py::class_<Design>(m, "Design")
      .def(py::init([](std::vector<Eigen::MatrixXd> gammas, Eigen::MatrixXd scalars) {
             return Design{std::move(gammas), std::move(scalars)};
           }),
           py::arg("gammas"), py::arg("scalars"))
      .def_readwrite("gammas", &Design::gammas)
      .def_readwrite("scalars", &Design::scalars);

  m.def("build_model_matrix",
        [](const ProblemSpec& spec, const Design& d) {
          auto mm = build_model_matrix(spec, d);
          return py::make_tuple(mm.z, mm.column_labels);
        },
        py::arg("spec"), py::arg("design"), "Returns (Z, column_labels).");
  m.def("least_squares_estimate",
        [](const Eigen::MatrixXd& z, const Eigen::VectorXd& y) {
          return least_squares_estimate(ModelMatrix{z, {}}, y);
        },
        py::arg("z"), py::arg("y"));
  m.def("information_matrix", [](const Eigen::MatrixXd& z) { return information_matrix(z); },
        py::arg("z"));
  m.def("a_criterion", [](const Eigen::MatrixXd& mat) { return to_optional(a_criterion(mat)); },
        py::arg("m"), "tr(M^-1), or None for a singular information matrix.");
  m.def("a_efficiency",
        [](const Eigen::MatrixXd& ref, const Eigen::MatrixXd& test) { return a_efficiency(ref, test); },
        py::arg("m_ref"), py::arg("m_test"));
  m.def("evaluate_design",
        [](const ProblemSpec& spec, const Design& d) { return to_optional(evaluate_design(spec, d)); },
        py::arg("spec"), py::arg("design"));

  py::class_<OptimizerConfig>(m, "OptimizerConfig")
      .def(py::init<>())
      .def_readwrite("starts", &OptimizerConfig::starts)
      .def_readwrite("seed", &OptimizerConfig::seed)
      .def_readwrite("grid_size", &OptimizerConfig::grid_size)
      .def_readwrite("max_sweeps", &OptimizerConfig::max_sweeps)
      .def_readwrite("improvement_tol", &OptimizerConfig::improvement_tol)
      .def_readwrite("refine", &OptimizerConfig::refine)
      .def_readwrite("workers", &OptimizerConfig::workers);

  py::class_<OptimizerResult>(m, "OptimizerResult")
      .def_readonly("best_design", &OptimizerResult::best_design)
      .def_property_readonly("best_value", [](const OptimizerResult& r) { return r.best_value.raw(); })
      .def_readonly("per_start_values", &OptimizerResult::per_start_values)
      .def_readonly("per_start_sweeps", &OptimizerResult::per_start_sweeps)
      .def_readonly("winning_start", &OptimizerResult::winning_start)
      .def_readonly("sweeps_used", &OptimizerResult::sweeps_used);

  m.def("coordinate_exchange", &coordinate_exchange, py::arg("spec"), py::arg("config"),
        py::call_guard<py::gil_scoped_release>());

  m.def("exhaustive_vertex_search",
        [](const ProblemSpec& spec) {
          auto r = oracle::exhaustive_vertex_search(spec);
          return py::make_tuple(r.design, to_optional(r.value));
        },
        py::arg("spec"), "Returns (design, value); value is None if every vertex design is singular.");
}
