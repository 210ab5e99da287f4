// amfem: adaptive mixed FEM for the 2D Hodge Laplacian.
//
//   amfem <run|verify|table|mesh-info> [options]
//
// Exit codes: 0 success, 2 configuration error, 3 verification failure,
// 4 budget exhausted before the tolerance was met.

#include "amfem/adaptivity.hpp"
#include "amfem/report_io.hpp"
#include "amfem/verify.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using namespace amfem;

namespace {

constexpr int exit_config = 2;
constexpr int exit_verify = 3;
constexpr int exit_budget = 4;

struct Options {
  std::string problem = "M1";
  std::string mesh;
  double theta = 0.5;
  std::optional<double> theta_sigma;
  double tol = 1e-3;
  long max_dofs = 50000;
  int max_iters = 30;
  int quad = 16;
  bool uniform = false;
  std::string variant;
  std::string out = "amfem_out";
  int threads = 1;
  bool svg = false;
  unsigned seed = 12345;
  bool project_rhs = false;
  double solver_tol = 1e-12;
  std::string fault = "none";
  std::string source_table;
  int fit_degree = 1;
  int pre_refine = -1;
  int levels = 5;
  int reference_rounds = 2;
  std::vector<std::string> checks;
};

Mesh initial_mesh(const Options& o)
{
  if (o.mesh.empty()) {
    if (!o.source_table.empty()) throw ConfigError("--source-table needs --mesh");
    return builtin_mesh(find_problem(o.problem).default_mesh);
  }
  if (fs::exists(o.mesh)) return load_mesh(o.mesh);
  const auto names = builtin_mesh_names();
  if (std::find(names.begin(), names.end(), o.mesh) == names.end())
    throw ConfigError("mesh '" + o.mesh + "' is neither a file nor a builtin mesh");
  return builtin_mesh(o.mesh);
}

Problem resolve_problem(const Options& o, const Mesh& mesh)
{
  if (!o.source_table.empty()) {
    if (o.fit_degree != 0 && o.fit_degree != 1) throw ConfigError("fit-degree must be 0 or 1");
    const Variant v = o.variant.empty() ? Variant::hodge : parse_variant(o.variant);
    return load_source_table(o.source_table, mesh, o.fit_degree, v);
  }
  return find_problem(o.problem);
}

AfemConfig make_config(const Options& o, const Problem& problem)
{
  AfemConfig cfg;
  cfg.theta = o.theta;
  cfg.theta_sigma = o.theta_sigma;
  cfg.tol = o.tol;
  cfg.max_iterations = o.max_iters;
  cfg.max_dofs = o.max_dofs;
  cfg.variant = o.variant.empty() ? problem.variant : parse_variant(o.variant);
  cfg.quad_degree = o.quad;
  cfg.solver_tol = o.solver_tol;
  cfg.project_rhs = o.project_rhs;
  cfg.uniform = o.uniform;
  cfg.reference_rounds = o.reference_rounds;
  cfg.threads = o.threads;
  validate(cfg);
  return cfg;
}

fs::path output_dir(const Options& o)
{
  if (const char* env = std::getenv("AMFEM_OUT"); env && *env) return env;
  return o.out;
}

std::string fmt(double x)
{
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4e", x);
  return buf;
}

void print_table(std::ostream& out, const RunReport& run)
{
  out << "level     N    elems     h_max       eta     eta_sigma    error      effectivity\n";
  for (const auto& r : run.levels) {
    char line[256];
    const double err = std::isfinite(r.energy_error) ? r.energy_error : r.ref_error;
    std::snprintf(line, sizeof line, "%5d %7ld %8ld  %s  %s  %s  %s  %s\n", r.level, r.n_dofs, r.n_elements,
                  fmt(r.h_max).c_str(), fmt(r.eta_total).c_str(), fmt(r.eta_sigma).c_str(), fmt(err).c_str(),
                  fmt(r.effectivity).c_str());
    out << line;
  }
  for (const auto& r : run.rates)
    out << "rate " << r.quantity << " vs " << r.against << ": " << r.exponent << " (" << r.points << " levels)\n";
  out << "status: " << to_string(run.status) << ", errors from: " << run.error_source << '\n';
}

int cmd_run(const Options& o, bool table_only)
{
  Mesh initial = initial_mesh(o);
  const Problem problem = resolve_problem(o, initial);
  if (o.pre_refine > 0) initial = refine_uniform(initial, o.pre_refine);
  const AfemConfig cfg = make_config(o, problem);
  const RunReport run = afem_run(initial, problem, cfg);
  const fs::path dir = output_dir(o);
  write_run_artifacts(dir, run, o.svg);
  print_table(std::cout, run);
  std::cout << "artifacts: " << dir.string() << '\n';
  if (table_only) return 0;
  return run.status == RunStatus::converged ? 0 : exit_budget;
}

int cmd_verify(const Options& o, const CLI::App& sub)
{
  const Mesh initial = initial_mesh(o);
  const Problem problem = resolve_problem(o, initial);

  SuiteOptions so;
  Options v = o;
  // Smaller defaults than `run`: verify performs several runs.
  if (sub.count("--max-dofs") == 0) v.max_dofs = 20000;
  if (sub.count("--max-iters") == 0) v.max_iters = 20;
  if (sub.count("--tol") == 0) v.tol = 1e-8;
  so.afem = make_config(v, problem);
  so.pre_refine = o.pre_refine < 0 ? 2 : o.pre_refine;
  so.uniform_levels = o.levels;
  so.checks = o.checks;
  so.fault = parse_fault(o.fault);
  so.seed = o.seed;

  const auto result = verify_suite(problem, initial, so);
  const fs::path dir = output_dir(o);
  fs::create_directories(dir);
  if (result.uniform) write_run_artifacts(dir / "uniform", *result.uniform, o.svg);
  if (result.adaptive) write_run_artifacts(dir / "adaptive", *result.adaptive, o.svg);
  auto j = to_json(result.checks);
  j["problem"] = problem.name;
  j["fault"] = to_string(so.fault);
  write_json(dir / "checks.json", j);

  for (const auto& c : result.checks.checks) {
    std::cout << (c.passed ? "PASS " : "FAIL ") << c.name << "  measured " << c.measured << ' ' << c.comparison
              << ' ' << c.threshold;
    if (c.comparison == "in") std::cout << ".." << c.upper;
    if (c.surrogate) std::cout << "  [surrogate]";
    std::cout << '\n';
  }
  const bool ok = result.checks.passed();
  std::cout << (ok ? "verification passed" : "verification FAILED") << " (" << result.checks.checks.size()
            << " checks, fault " << to_string(so.fault) << ")\n";
  return ok ? 0 : exit_verify;
}

int cmd_mesh_info(const Options& o)
{
  Mesh mesh = initial_mesh(o);
  if (o.pre_refine > 0) mesh = refine_uniform(mesh, o.pre_refine);
  const auto m = mesh_metrics(mesh);
  std::string why;
  const bool conforming = mesh.is_conforming(&why);
  std::cout << "vertices " << m.n_vertices << "\nedges " << m.n_edges << "\nelements " << m.n_elements
            << "\ninterior_vertices " << m.n_interior_vertices << "\ninterior_edges " << m.n_interior_edges
            << "\nh_max " << m.h_max << "\nmin_angle_deg " << m.min_angle * 180.0 / M_PI << "\nconforming "
            << (conforming ? "yes" : "no (" + why + ")") << '\n';
  if (o.svg) {
    const fs::path dir = output_dir(o);
    fs::create_directories(dir);
    std::ofstream svg(dir / "mesh.svg");
    write_svg(svg, mesh);
    std::ofstream txt(dir / "mesh.txt");
    write_mesh(txt, mesh);
  }
  return 0;
}

void add_common(CLI::App& sub, Options& o)
{
  sub.add_option("--problem", o.problem, "M1, M2, S1, S2 or Z0");
  sub.add_option("--mesh", o.mesh, "mesh file or builtin tag (square, square2, lshape, lshape6)");
  sub.add_option("--theta", o.theta, "Doerfler parameter");
  sub.add_option("--theta-sigma", o.theta_sigma, "separate Doerfler parameter for eta_sigma");
  sub.add_option("--tol", o.tol, "stop when eta <= tol");
  sub.add_option("--max-dofs", o.max_dofs);
  sub.add_option("--max-iters", o.max_iters, "maximum number of levels");
  sub.add_option("--quad", o.quad, "quadrature degree");
  sub.add_flag("--uniform", o.uniform, "refine every element instead of marking");
  sub.add_option("--variant", o.variant, "hodge or maxwell (default: the problem's)");
  sub.add_option("--out", o.out, "output directory (AMFEM_OUT overrides)");
  sub.add_option("--threads", o.threads);
  sub.add_flag("--svg", o.svg, "also write mesh_<l>.svg");
  sub.add_option("--seed", o.seed);
  sub.add_flag("--project-rhs", o.project_rhs, "maxwell: project f onto the divergence-free subspace");
  sub.add_option("--solver-tol", o.solver_tol);
  sub.add_option("--source-table", o.source_table, "CSV x,y,fx,fy replacing the problem source");
  sub.add_option("--fit-degree", o.fit_degree, "polynomial degree of the source-table fit (0 or 1)");
  sub.add_option("--pre-refine", o.pre_refine, "uniform bisection rounds applied to the initial mesh");
  sub.add_option("--reference-rounds", o.reference_rounds, "extra uniform rounds of the reference mesh");
}

}  // namespace

int main(int argc, char** argv)
{
  CLI::App app{"adaptive mixed finite elements for the Hodge Laplacian"};
  app.require_subcommand(1);
  Options o;
  auto* run = app.add_subcommand("run", "adaptive (or --uniform) solve with artifacts");
  auto* verify = app.add_subcommand("verify", "property and oracle checks; exit 3 on any failure");
  auto* table = app.add_subcommand("table", "run and print the convergence table");
  auto* info = app.add_subcommand("mesh-info", "mesh statistics");
  for (auto* s : {run, verify, table, info}) add_common(*s, o);
  verify->add_option("--inject-fault", o.fault, "none, d0-sign, non-nested or marking");
  verify->add_option("--levels", o.levels, "levels of the uniform run");
  verify->add_option("--checks", o.checks, "subset of checks")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return exit_config;
  }

  try {
    if (*run) return cmd_run(o, false);
    if (*table) return cmd_run(o, true);
    if (*verify) return cmd_verify(o, *verify);
    return cmd_mesh_info(o);
  } catch (const InsufficientDataError& e) {
    std::cerr << "amfem: " << e.what() << '\n';
    return exit_verify;
  } catch (const std::invalid_argument& e) {
    std::cerr << "amfem: " << e.what() << '\n';
    return exit_config;
  } catch (const MeshError& e) {
    std::cerr << "amfem: " << e.what() << '\n';
    return exit_config;
  } catch (const EmptySpaceError& e) {
    std::cerr << "amfem: " << e.what() << '\n';
    return exit_config;
  } catch (const MarkingError& e) {
    std::cerr << "amfem: " << e.what() << '\n';
    return exit_verify;
  } catch (const std::exception& e) {
    std::cerr << "amfem: " << e.what() << '\n';
    return 1;
  }
}
