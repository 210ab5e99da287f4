#include "amfem/report_io.hpp"

#include <cmath>
#include <fstream>
#include <ostream>

namespace amfem {

namespace {

// NaN and inf have no JSON spelling.
nlohmann::json num(double x)
{
  if (std::isfinite(x)) return x;
  return nullptr;
}

std::ofstream open_out(const std::filesystem::path& path)
{
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

}  // namespace

nlohmann::json to_json(const AfemConfig& cfg)
{
  nlohmann::json j;
  j["theta"] = cfg.theta;
  j["theta_sigma"] = cfg.theta_sigma ? nlohmann::json(*cfg.theta_sigma) : nlohmann::json(nullptr);
  j["tol"] = cfg.tol;
  j["max_iterations"] = cfg.max_iterations;
  j["max_dofs"] = cfg.max_dofs;
  j["variant"] = to_string(cfg.variant);
  j["quad_degree"] = cfg.quad_degree;
  j["solver_tol"] = cfg.solver_tol;
  j["project_rhs"] = cfg.project_rhs;
  j["uniform"] = cfg.uniform;
  j["uniform_rounds"] = cfg.uniform_rounds;
  j["reference_rounds"] = cfg.reference_rounds;
  j["threads"] = cfg.threads;
  j["inject_marking_fault"] = cfg.inject_marking_fault;
  return j;
}

nlohmann::json to_json(const RunReport& run)
{
  nlohmann::json j;
  j["problem"] = run.problem;
  j["config"] = to_json(run.config);
  j["status"] = to_string(run.status);
  j["error_source"] = run.error_source;
  j["has_reference"] = run.has_reference;
  j["reference_dofs"] = run.reference_dofs;

  auto& levels = j["levels"] = nlohmann::json::array();
  for (const auto& r : run.levels) {
    nlohmann::json l;
    l["level"] = r.level;
    l["n_dofs"] = r.n_dofs;
    l["n_elements"] = r.n_elements;
    l["h_max"] = r.h_max;
    l["min_angle"] = r.min_angle;
    l["eta_total"] = num(r.eta_total);
    l["eta_sigma"] = num(r.eta_sigma);
    l["osc"] = num(r.osc);
    l["graph_norm"] = num(r.graph_norm);
    l["delta_u_ratio"] = num(r.delta_u_ratio);
    l["energy_error"] = num(r.energy_error);
    l["sigma_error"] = num(r.sigma_error);
    l["u_error"] = num(r.u_error);
    l["effectivity"] = num(r.effectivity);
    l["ref_error"] = num(r.ref_error);
    l["ref_sigma_error"] = num(r.ref_sigma_error);
    l["ref_u_error"] = num(r.ref_u_error);
    l["solver"] = {{"method", r.solution.method},
                   {"relative_residual", num(r.solution.relative_residual)},
                   {"backward_error", num(r.solution.backward_error)},
                   {"compatibility_violation", num(r.solution.compatibility_violation)},
                   {"rhs_projected", r.solution.rhs_projected}};
    l["marked"] = r.marked;
    if (r.marked) {
      l["marks"] = {{"sigma", r.marks.sigma.size()},
                    {"total", r.marks.total.size()},
                    {"combined", r.marks.combined.size()},
                    {"bulk_sigma_ok", r.bulk_sigma_ok},
                    {"bulk_total_ok", r.bulk_total_ok}};
    }
    levels.push_back(std::move(l));
  }

  auto& pairs = j["pairs"] = nlohmann::json::array();
  for (const auto& p : run.pairs)
    pairs.push_back({{"l", p.l},
                     {"m", p.m},
                     {"E", num(p.big_e)},
                     {"cross", num(p.cross)},
                     {"ratio", num(p.ratio)},
                     {"eps", num(p.eps)},
                     {"h", p.h}});
  auto& con = j["contraction"] = nlohmann::json::array();
  for (const auto& c : run.contraction)
    con.push_back({{"m", c.m}, {"windows", c.windows}, {"factor", num(c.factor)}, {"lsq_factor", num(c.lsq_factor)}});
  auto& per = j["perturbation"] = nlohmann::json::array();
  for (const auto& p : run.perturbation) per.push_back({{"q_c", p.q_c}, {"c_theta", num(p.c_theta)}});
  auto& comp = j["composite"] = nlohmann::json::array();
  for (const auto& c : run.composite)
    comp.push_back({{"m", c.m}, {"windows", c.windows}, {"alpha", num(c.alpha)}, {"rho", num(c.rho)}});
  auto& rates = j["rates"] = nlohmann::json::array();
  for (const auto& r : run.rates)
    rates.push_back({{"quantity", r.quantity}, {"against", r.against}, {"exponent", num(r.exponent)},
                     {"points", r.points}});
  return j;
}

nlohmann::json to_json(const CheckReport& rep)
{
  nlohmann::json j;
  j["passed"] = rep.passed();
  auto& arr = j["checks"] = nlohmann::json::array();
  for (const auto& c : rep.checks) {
    nlohmann::json e{{"name", c.name},
                     {"passed", c.passed},
                     {"measured", num(c.measured)},
                     {"comparison", c.comparison},
                     {"threshold", num(c.threshold)},
                     {"surrogate", c.surrogate},
                     {"detail", c.detail}};
    if (c.comparison == "in") e["upper"] = num(c.upper);
    arr.push_back(std::move(e));
  }
  return j;
}

void write_convergence_csv(std::ostream& out, const RunReport& run)
{
  out << "#level,n_dofs,n_elements,h_max,eta_total,eta_sigma,osc,energy_error,sigma_error,u_error,ref_error,"
         "effectivity,delta_u_ratio\n";
  out.precision(17);
  for (const auto& r : run.levels)
    out << r.level << ',' << r.n_dofs << ',' << r.n_elements << ',' << r.h_max << ',' << r.eta_total << ','
        << r.eta_sigma << ',' << r.osc << ',' << r.energy_error << ',' << r.sigma_error << ',' << r.u_error << ','
        << r.ref_error << ',' << r.effectivity << ',' << r.delta_u_ratio << '\n';
}

void write_json(const std::filesystem::path& path, const nlohmann::json& j)
{
  auto out = open_out(path);
  out << j.dump(2) << '\n';
}

void write_run_artifacts(const std::filesystem::path& dir, const RunReport& run, bool svg, const CheckReport* checks)
{
  std::filesystem::create_directories(dir);
  auto j = to_json(run);
  if (checks) j["checks"] = to_json(*checks);
  write_json(dir / "report.json", j);
  {
    auto out = open_out(dir / "convergence.csv");
    write_convergence_csv(out, run);
  }
  for (const auto& r : run.levels) {
    const std::string tag = std::to_string(r.level);
    {
      auto out = open_out(dir / ("indicators_" + tag + ".csv"));
      write_indicators_csv(out, r.indicators);
    }
    {
      auto out = open_out(dir / ("mesh_" + tag + ".txt"));
      write_mesh(out, *r.mesh);
    }
    if (svg) {
      auto out = open_out(dir / ("mesh_" + tag + ".svg"));
      write_svg(out, *r.mesh, r.marked ? r.marks.combined.elements : std::vector<int>{});
    }
  }
}

}  // namespace amfem
