#include "heatbem/study.hpp"

#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace heatbem;

namespace {

py::dict to_dict(const StudyRecord& r) {
  py::dict d;
  d["level"] = r.level;
  d["n"] = r.n;
  d["l2_error"] = r.l2_error;
  d["eoc"] = r.eoc;
  d["kappa_v_sv"] = r.kappa_v_sv;
  d["kappa_v_eig"] = r.kappa_v_eig;
  d["kappa_diag_sv"] = r.kappa_diag_sv;
  d["kappa_diag_eig"] = r.kappa_diag_eig;
  d["kappa_calderon_sv"] = r.kappa_calderon_sv;
  d["kappa_calderon_eig"] = r.kappa_calderon_eig;
  d["iters_none"] = r.iters_none;
  d["iters_diag"] = r.iters_diag;
  d["iters_calderon"] = r.iters_calderon;
  d["margin_v"] = r.margin_v;
  d["margin_d"] = r.margin_d;
  d["quasi_uniformity"] = r.quasi_uniformity;
  return d;
}

ExperimentConfig make_config(int example, std::optional<double> alpha, int levels, double tol,
                             const std::vector<std::string>& precond, int max_kappa_n,
                             double theta, int max_elements) {
  ExperimentConfig cfg;
  if (example != 1 && example != 2)
    throw ConfigError("example must be 1 or 2");
  cfg.example = example == 1 ? ExampleKind::Example1 : ExampleKind::Example2;
  cfg.alpha = alpha;
  cfg.max_level = levels;
  cfg.tol = tol;
  cfg.max_kappa_n = max_kappa_n;
  cfg.theta = theta;
  cfg.max_elements = max_elements;
  cfg.preconditioners.clear();
  for (const auto& p : precond) {
    if (p == "none")
      cfg.preconditioners.push_back(PreconditionerKind::Identity);
    else if (p == "diag")
      cfg.preconditioners.push_back(PreconditionerKind::Diagonal);
    else if (p == "calderon")
      cfg.preconditioners.push_back(PreconditionerKind::Calderon);
    else
      throw ConfigError("unknown preconditioner '" + p + "'");
  }
  cfg.validate();
  return cfg;
}

py::list records(const Study& s) {
  py::list out;
  for (const auto& r : s.records)
    out.append(to_dict(r));
  return out;
}

Problem make_py_problem(double alpha, double a, double b, double horizon,
                        std::optional<std::function<double(double)>> initial,
                        std::optional<std::function<double(int, double)>> dirichlet) {
  Problem p;
  p.alpha = alpha;
  p.a = a;
  p.b = b;
  p.horizon = horizon;
  if (initial)
    p.initial = *initial;
  if (dirichlet)
    p.dirichlet = [g = *dirichlet](Side s, double t) { return g(static_cast<int>(s), t); };
  p.validate();
  return p;
}

} // namespace

PYBIND11_MODULE(_heatbem, m) {
  m.doc() = "Space-time Galerkin boundary elements for the 1D heat equation";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_RuntimeError);

  py::enum_<Side>(m, "Side").value("Left", Side::Left).value("Right", Side::Right);

  m.def("fundamental_solution",
        [](double d, double tau, double alpha) { return fundamental_solution({d, tau}, {alpha}); },
        py::arg("d"), py::arg("tau"), py::arg("alpha") = 1.0);
  m.def("primitive_I0", [](double d, double tau, double alpha) { return primitive_I0(d, tau, {alpha}); },
        py::arg("d"), py::arg("tau"), py::arg("alpha") = 1.0);
  m.def("primitive_J0", [](double d, double tau, double alpha) { return primitive_J0(d, tau, {alpha}); },
        py::arg("d"), py::arg("tau"), py::arg("alpha") = 1.0);

  py::class_<BoundaryMesh>(m, "BoundaryMesh")
      .def(py::init<double, std::vector<double>, std::vector<double>, int>(), py::arg("horizon"),
           py::arg("left_nodes"), py::arg("right_nodes"), py::arg("level") = 0)
      .def_property_readonly("horizon", &BoundaryMesh::horizon)
      .def_property_readonly("level", &BoundaryMesh::level)
      .def("__len__", &BoundaryMesh::size)
      .def("nodes", &BoundaryMesh::nodes, py::arg("side"))
      .def("sizes", [](const BoundaryMesh& mesh) {
        std::vector<double> h;
        for (const auto& e : mesh.elements())
          h.push_back(e.size());
        return h;
      })
      .def("sides", [](const BoundaryMesh& mesh) {
        std::vector<int> s;
        for (const auto& e : mesh.elements())
          s.push_back(static_cast<int>(e.side));
        return s;
      });
  m.def("uniform_mesh", [](double horizon, int level) { return uniform_mesh(horizon, level); },
        py::arg("horizon"), py::arg("level"));
  m.def("refine_uniform", &refine_uniform);
  m.def("refine_adaptive",
        [](const BoundaryMesh& mesh, const std::vector<double>& eta, double theta) {
          return refine_adaptive(mesh, eta, theta);
        },
        py::arg("mesh"), py::arg("indicators"), py::arg("theta") = 0.5);

  py::class_<Problem>(m, "Problem")
      .def(py::init(&make_py_problem), py::arg("alpha") = 1.0, py::arg("a") = 0.0,
           py::arg("b") = 1.0, py::arg("horizon") = 1.0, py::arg("initial") = py::none(),
           py::arg("dirichlet") = py::none(),
           "Dirichlet problem; initial(x) and dirichlet(side, t) with side 0 = left, 1 = right")
      .def_readonly("alpha", &Problem::alpha)
      .def_readonly("horizon", &Problem::horizon);
  m.def("example_problem",
        [](int example, std::optional<double> alpha) {
          if (example == 1)
            return example1_problem(alpha.value_or(default_alpha(ExampleKind::Example1)));
          if (example == 2)
            return example2_problem(alpha.value_or(default_alpha(ExampleKind::Example2)));
          throw ConfigError("example must be 1 or 2");
        },
        py::arg("example"), py::arg("alpha") = py::none());

  m.def("assemble_operators",
        [](const BoundaryMesh& mesh, double alpha) {
          const OperatorMatrices ops = assemble_operators(mesh, {alpha});
          py::dict d;
          d["V"] = ops.V;
          d["K"] = ops.K;
          d["D"] = ops.D;
          d["M"] = ops.mass;
          return d;
        },
        py::arg("mesh"), py::arg("alpha") = 1.0, "Dense V, K, D and the mass diagonal M");
  m.def("assemble_rhs", [](const BoundaryMesh& mesh, const Problem& p) { return assemble_rhs(mesh, p); },
        py::arg("mesh"), py::arg("problem"));
  m.def("solve",
        [](const BoundaryMesh& mesh, const Problem& p) {
          return direct_solve(assemble_V(mesh, p.kernel()), assemble_rhs(mesh, p));
        },
        py::arg("mesh"), py::arg("problem"), "Flux coefficients by a direct solve");
  m.def("evaluate_interior",
        [](double x, double t, const BoundaryMesh& mesh, const Vector& w, const Problem& p) {
          return evaluate_interior(x, t, {mesh, w}, p);
        },
        py::arg("x"), py::arg("t"), py::arg("mesh"), py::arg("flux"), py::arg("problem"));

  m.def("gmres",
        [](const Matrix& a, const Vector& b, const std::string& precond, std::optional<Matrix> d,
           std::optional<Vector> mass, double tol, int max_iter) {
          Preconditioner p;
          if (precond == "diag")
            p = Preconditioner::diagonal(a);
          else if (precond == "calderon") {
            if (!d || !mass)
              throw ConfigError("calderon preconditioning needs D and M");
            p = Preconditioner::calderon(*mass, std::make_shared<const Matrix>(*d));
          } else if (precond != "none")
            throw ConfigError("unknown preconditioner '" + precond + "'");
          const SolveReport r = gmres(a, b, p, {tol, max_iter});
          py::dict out;
          out["solution"] = r.solution;
          out["iterations"] = r.iterations;
          out["converged"] = r.converged;
          out["relative_residual"] = r.true_relative_residual;
          out["history"] = r.relative_residual_history;
          return out;
        },
        py::arg("A"), py::arg("b"), py::arg("precond") = "none", py::arg("D") = py::none(),
        py::arg("M") = py::none(), py::arg("tol") = 1e-8, py::arg("max_iter") = 1000);

  m.def("condition_number",
        [](const Matrix& a, const std::string& convention) {
          if (convention != "sv" && convention != "eig")
            throw ConfigError("convention must be 'sv' or 'eig'");
          return condition_number(a, convention == "sv" ? KappaConvention::SingularValues
                                                        : KappaConvention::Eigenvalues);
        },
        py::arg("A"), py::arg("convention") = "sv");

  m.def("reference_flux",
        [](int example, double alpha, int side, double t) {
          const SineSeries s = example == 1 ? example1_series(alpha) : example2_series(alpha);
          return s.flux(static_cast<Side>(side), t);
        },
        py::arg("example"), py::arg("alpha"), py::arg("side"), py::arg("t"));

  const std::vector<std::string> all{"none", "diag", "calderon"};
  m.def("uniform_study",
        [](int example, std::optional<double> alpha, int levels, double tol,
           const std::vector<std::string>& precond, int max_kappa_n) {
          py::gil_scoped_release release;
          const Study s = run_uniform_study(make_config(example, alpha, levels, tol, precond, max_kappa_n, 0.5, 0));
          py::gil_scoped_acquire acquire;
          return records(s);
        },
        py::arg("example") = 1, py::arg("alpha") = py::none(), py::arg("levels") = 6,
        py::arg("tol") = 1e-8, py::arg("precond") = all, py::arg("max_kappa_n") = 1024);
  m.def("adaptive_study",
        [](int example, std::optional<double> alpha, int steps, double tol,
           const std::vector<std::string>& precond, int max_kappa_n, double theta, int max_elements) {
          py::gil_scoped_release release;
          const Study s = run_adaptive_study(
              make_config(example, alpha, steps, tol, precond, max_kappa_n, theta, max_elements));
          py::gil_scoped_acquire acquire;
          return records(s);
        },
        py::arg("example") = 2, py::arg("alpha") = py::none(), py::arg("steps") = 10,
        py::arg("tol") = 1e-8, py::arg("precond") = all, py::arg("max_kappa_n") = 1024,
        py::arg("theta") = 0.5, py::arg("max_elements") = 0);
}
