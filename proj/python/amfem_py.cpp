// Python bindings. Matrices come back as scipy.sparse CSC, reports as dicts.

#include "amfem/adaptivity.hpp"
#include "amfem/report_io.hpp"
#include "amfem/verify.hpp"

#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <climits>

namespace py = pybind11;
using namespace amfem;

namespace {

py::object to_python(const nlohmann::json& j)
{
  return py::module_::import("json").attr("loads")(j.dump());
}

Eigen::MatrixX2d vertex_array(const Mesh& m)
{
  Eigen::MatrixX2d v(m.n_vertices(), 2);
  for (std::size_t i = 0; i < m.n_vertices(); ++i) v.row(i) << m.vertices()[i].x, m.vertices()[i].y;
  return v;
}

Eigen::MatrixX3i triangle_array(const Mesh& m)
{
  Eigen::MatrixX3i t(m.n_triangles(), 3);
  for (std::size_t i = 0; i < m.n_triangles(); ++i)
    for (int k = 0; k < 3; ++k) t(i, k) = m.triangles()[i][k];
  return t;
}

Mesh mesh_from_arrays(const Eigen::MatrixX2d& v, const Eigen::MatrixX3i& t)
{
  std::vector<Point> pts(v.rows());
  for (Eigen::Index i = 0; i < v.rows(); ++i) pts[i] = {v(i, 0), v(i, 1)};
  std::vector<std::array<int, 3>> tris(t.rows());
  for (Eigen::Index i = 0; i < t.rows(); ++i) tris[i] = {t(i, 0), t(i, 1), t(i, 2)};
  return Mesh(std::move(pts), std::move(tris));
}

AfemConfig make_config(double theta, std::optional<double> theta_sigma, double tol, int max_iterations,
                       long max_dofs, const std::string& variant, int quad_degree, bool uniform, bool project_rhs,
                       int threads)
{
  AfemConfig c;
  c.theta = theta;
  c.theta_sigma = theta_sigma;
  c.tol = tol;
  c.max_iterations = max_iterations;
  c.max_dofs = max_dofs;
  c.variant = parse_variant(variant);
  c.quad_degree = quad_degree;
  c.uniform = uniform;
  c.project_rhs = project_rhs;
  c.threads = threads;
  validate(c);
  return c;
}

}  // namespace

PYBIND11_MODULE(_amfem, m)
{
  m.doc() = "Adaptive mixed finite elements for the Hodge Laplacian on 1-forms in 2D";

  py::register_exception<MeshError>(m, "MeshError", PyExc_ValueError);
  py::register_exception<EmptySpaceError>(m, "EmptySpaceError", PyExc_ValueError);
  py::register_exception<MarkingError>(m, "MarkingError", PyExc_RuntimeError);

  py::class_<Mesh, std::shared_ptr<Mesh>>(m, "Mesh")
      .def(py::init([](const Eigen::MatrixX2d& v, const Eigen::MatrixX3i& t) {
             return std::make_shared<Mesh>(mesh_from_arrays(v, t));
           }),
           py::arg("vertices"), py::arg("triangles"))
      .def_property_readonly("vertices", &vertex_array)
      .def_property_readonly("triangles", &triangle_array)
      .def_property_readonly("parent", &Mesh::parent)
      .def_property_readonly("n_vertices", &Mesh::n_vertices)
      .def_property_readonly("n_edges", &Mesh::n_edges)
      .def_property_readonly("n_triangles", &Mesh::n_triangles)
      .def("area", &Mesh::area)
      .def("total_area", &Mesh::total_area)
      .def("is_conforming", [](const Mesh& self) { return self.is_conforming(); })
      .def("bisect", [](const Mesh& self, std::vector<int> marks) { return self.bisect(make_mark_set(std::move(marks))); },
           py::arg("marked"))
      .def("refine_uniform", [](const Mesh& self, int rounds) { return refine_uniform(self, rounds); },
           py::arg("rounds") = 1)
      .def("metrics",
           [](const Mesh& self) {
             const MeshMetrics mm = mesh_metrics(self);
             py::dict d;
             d["h_max"] = mm.h_max;
             d["min_angle"] = mm.min_angle;
             d["n_vertices"] = mm.n_vertices;
             d["n_edges"] = mm.n_edges;
             d["n_elements"] = mm.n_elements;
             d["n_interior_edges"] = mm.n_interior_edges;
             d["n_interior_vertices"] = mm.n_interior_vertices;
             return d;
           })
      .def("save", [](const Mesh& self, const std::filesystem::path& p) { save_mesh(p, self); });

  m.def("builtin_mesh", &builtin_mesh, py::arg("tag"));
  m.def("builtin_mesh_names", &builtin_mesh_names);
  m.def("load_mesh", &load_mesh, py::arg("path"));

  py::class_<Complex, std::shared_ptr<Complex>>(m, "Complex")
      .def("dim", &Complex::dim)
      .def_readonly("d0", &Complex::d0)
      .def_readonly("d1", &Complex::d1)
      .def_readonly("m0", &Complex::m0)
      .def_readonly("m1", &Complex::m1)
      .def_readonly("m2", &Complex::m2);

  m.def(
      "build_complex",
      [](const Mesh& mesh) { return std::const_pointer_cast<Complex>(build_complex(mesh)); }, py::arg("mesh"));

  m.def(
      "poincare_constants",
      [](const Mesh& mesh) {
        const PoincareConstants pc = discrete_poincare_constants(*build_complex(mesh));
        py::dict d;
        d["cp_d"] = pc.cp_d;
        d["cp_delta"] = pc.cp_delta;
        d["lambda_d"] = pc.lambda_d;
        d["lambda_delta"] = pc.lambda_delta;
        return d;
      },
      py::arg("mesh"));

  m.def("problem_names", [] {
    std::vector<std::string> names;
    for (const auto& p : problem_catalog()) names.push_back(p.name);
    return names;
  });

  m.def(
      "solve",
      [](const std::string& problem, const Mesh& mesh, std::optional<std::string> variant, int quad_degree,
         bool project_rhs) {
        const Problem p = find_problem(problem);
        const Variant v = variant ? parse_variant(*variant) : p.variant;
        const auto cx = build_complex(mesh);
        const SaddleSystem sys = assemble(cx, p.f, v, quad_degree);
        SolveOptions so;
        so.project_rhs = project_rhs;
        const MixedSolution sol = solve(sys, so);
        const IndicatorField ind = estimate(*cx, sol, p, quad_degree);
        py::dict d;
        d["sigma"] = Vector(sol.sigma.coeffs);
        d["u"] = Vector(sol.u.coeffs);
        d["method"] = sol.method;
        d["relative_residual"] = sol.relative_residual;
        d["graph_norm"] = graph_norm(sol);
        d["eta_total_sq"] = ind.eta_total_sq;
        d["eta_sigma_sq"] = ind.eta_sigma_sq;
        d["osc_sq"] = ind.osc_sq;
        if (p.has_exact()) d["energy_error"] = eval_error(p, sol.sigma, sol.u, quad_degree).energy;
        return d;
      },
      py::arg("problem"), py::arg("mesh"), py::arg("variant") = py::none(), py::arg("quad_degree") = 16,
      py::arg("project_rhs") = false);

  m.def(
      "dorfler",
      [](const std::vector<double>& indicators, double theta) { return dorfler(indicators, theta).elements; },
      py::arg("indicators"), py::arg("theta"));

  m.def(
      "run",
      [](const std::string& problem, std::optional<std::shared_ptr<Mesh>> mesh, double theta,
         std::optional<double> theta_sigma, double tol, int max_iterations, long max_dofs,
         std::optional<std::string> variant, int quad_degree, bool uniform, bool project_rhs, int threads) {
        const Problem p = find_problem(problem);
        const AfemConfig cfg = make_config(theta, theta_sigma, tol, max_iterations, max_dofs,
                                           variant.value_or(to_string(p.variant)), quad_degree, uniform, project_rhs,
                                           threads);
        const Mesh initial = mesh ? **mesh : builtin_mesh(p.default_mesh);
        RunReport run;
        {
          py::gil_scoped_release release;
          run = afem_run(initial, p, cfg);
        }
        return to_python(to_json(run));
      },
      py::arg("problem"), py::arg("mesh") = py::none(), py::arg("theta") = 0.5, py::arg("theta_sigma") = py::none(),
      py::arg("tol") = 1e-3, py::arg("max_iterations") = 30, py::arg("max_dofs") = 50000,
      py::arg("variant") = py::none(), py::arg("quad_degree") = 16, py::arg("uniform") = false,
      py::arg("project_rhs") = false, py::arg("threads") = 1);

  m.def(
      "verify",
      [](const std::string& problem, std::optional<std::shared_ptr<Mesh>> mesh, std::vector<std::string> checks,
         const std::string& fault, int max_iterations, long max_dofs, int levels, int pre_refine,
         std::optional<std::string> variant) {
        const Problem p = find_problem(problem);
        SuiteOptions so;
        so.afem = make_config(0.5, std::nullopt, 1e-8, max_iterations, max_dofs,
                              variant.value_or(to_string(p.variant)), 16, false, false, 1);
        so.checks = std::move(checks);
        so.fault = parse_fault(fault);
        so.uniform_levels = levels;
        so.pre_refine = pre_refine;
        const Mesh initial = mesh ? **mesh : builtin_mesh(p.default_mesh);
        SuiteResult r;
        {
          py::gil_scoped_release release;
          r = verify_suite(p, initial, so);
        }
        py::dict d;
        d["passed"] = r.checks.passed();
        d["checks"] = to_python(to_json(r.checks));
        return d;
      },
      py::arg("problem"), py::arg("mesh") = py::none(), py::arg("checks") = std::vector<std::string>{},
      py::arg("fault") = "none", py::arg("max_iterations") = 20, py::arg("max_dofs") = 20000,
      py::arg("levels") = 5, py::arg("pre_refine") = 2, py::arg("variant") = py::none());
}
