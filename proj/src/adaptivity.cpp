#include "amfem/adaptivity.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cmath>
#include <numeric>

namespace amfem {

void validate(const AfemConfig& cfg)
{
  if (!(cfg.theta > 0.0 && cfg.theta < 1.0)) throw ConfigError("theta must satisfy 0 < theta < 1");
  if (cfg.theta_sigma && !(*cfg.theta_sigma > 0.0 && *cfg.theta_sigma < 1.0))
    throw ConfigError("theta-sigma must satisfy 0 < theta < 1");
  if (!(cfg.tol > 0.0)) throw ConfigError("tol must be positive");
  if (cfg.max_iterations < 1) throw ConfigError("max-iters must be at least 1");
  if (cfg.max_dofs < 1) throw ConfigError("max-dofs must be positive");
  if (cfg.quad_degree < 2 || cfg.quad_degree > 40) throw ConfigError("quad must lie in [2, 40]");
  if (!(cfg.solver_tol > 0.0 && cfg.solver_tol <= 1e-6)) throw ConfigError("solver tolerance must lie in (0, 1e-6]");
  if (cfg.uniform_rounds < 1) throw ConfigError("uniform rounds must be at least 1");
  if (cfg.reference_rounds < 0) throw ConfigError("reference rounds must be non-negative");
  if (cfg.threads < 1) throw ConfigError("threads must be at least 1");
}

std::string to_string(RunStatus s)
{
  switch (s) {
    case RunStatus::converged: return "converged";
    case RunStatus::budget_iterations: return "budget_iterations";
    case RunStatus::budget_dofs: return "budget_dofs";
  }
  return "unknown";
}

namespace {

constexpr double bulk_slack = 1e-12;

std::vector<int> descending_order(const std::vector<double>& v)
{
  std::vector<int> order(v.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return v[a] > v[b]; });
  return order;
}

}  // namespace

MarkSet dorfler(const std::vector<double>& indicators, double theta, MarkProvenance provenance)
{
  if (!(theta > 0.0 && theta <= 1.0)) throw std::invalid_argument("dorfler: theta must lie in (0, 1]");
  for (double v : indicators)
    if (!(v >= 0.0)) throw std::invalid_argument("dorfler: indicators must be non-negative");
  const double total = sorted_sum(indicators);
  std::vector<int> chosen;
  if (total > 0.0) {
    const double goal = theta * total * (1.0 - bulk_slack);
    double acc = 0.0;
    for (int t : descending_order(indicators)) {
      if (acc >= goal || indicators[t] == 0.0) break;
      chosen.push_back(t);
      acc += indicators[t];
    }
  }
  return make_mark_set(std::move(chosen), provenance);
}

bool bulk_holds(const std::vector<double>& indicators, const std::vector<int>& set, double theta)
{
  std::vector<double> sel;
  sel.reserve(set.size());
  for (int t : set) sel.push_back(indicators.at(t));
  return sorted_sum(sel) >= theta * sorted_sum(indicators) * (1.0 - bulk_slack);
}

std::size_t minimal_bulk_cardinality(const std::vector<double>& indicators, double theta)
{
  const std::size_t n = indicators.size();
  if (n > 20) throw std::invalid_argument("minimal_bulk_cardinality: too many elements for enumeration");
  const double goal = theta * sorted_sum(indicators) * (1.0 - bulk_slack);
  std::size_t best = n;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    const auto k = static_cast<std::size_t>(std::popcount(mask));
    if (k >= best) continue;
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      if (mask & (1u << i)) s += indicators[i];
    if (s >= goal) best = k;
  }
  return best;
}

DualMark dual_mark(const IndicatorField& ind, double theta, std::optional<double> theta_sigma)
{
  DualMark m;
  m.sigma = dorfler(ind.eta_sigma_sq, theta_sigma.value_or(theta), MarkProvenance::sigma);
  m.total = dorfler(ind.eta_total_sq, theta, MarkProvenance::total);
  std::vector<int> all = m.sigma.elements;
  all.insert(all.end(), m.total.elements.begin(), m.total.elements.end());
  m.combined = make_mark_set(std::move(all), MarkProvenance::combined);
  return m;
}

namespace {

long count_dofs(const Mesh& mesh)
{
  long n = 0;
  for (bool b : mesh.boundary_vertex()) n += b ? 0 : 1;
  for (bool b : mesh.boundary_edge()) n += b ? 0 : 1;
  return n;
}

double m_norm(const SparseMatrix& m, const Vector& x) { return std::sqrt(std::max(0.0, x.dot(m * x))); }

}  // namespace

RunReport afem_run(const Mesh& initial, const Problem& problem, const AfemConfig& cfg)
{
  validate(cfg);
  RunReport run;
  run.problem = problem.name;
  run.config = cfg;
  auto mesh = std::make_shared<const Mesh>(initial);
  const double theta_sigma = cfg.theta_sigma.value_or(cfg.theta);

  for (int l = 0;; ++l) {
    LevelRecord rec;
    rec.level = l;
    rec.mesh = mesh;
    rec.complex = build_complex(mesh);
    const auto sys = assemble(rec.complex, problem.f, cfg.variant, cfg.quad_degree, cfg.threads);
    SolveOptions opts;
    opts.tol = cfg.solver_tol;
    opts.project_rhs = cfg.project_rhs;
    rec.solution = solve(sys, opts);
    rec.indicators = estimate(*rec.complex, rec.solution, problem, cfg.quad_degree, cfg.threads);

    const auto metrics = mesh_metrics(*mesh);
    rec.n_dofs = rec.complex->dim(0) + rec.complex->dim(1);
    rec.n_elements = static_cast<long>(mesh->n_triangles());
    rec.h_max = metrics.h_max;
    rec.min_angle = metrics.min_angle;
    rec.eta_total = std::sqrt(rec.indicators.total_eta_sq());
    rec.eta_sigma = std::sqrt(rec.indicators.total_eta_sigma_sq());
    rec.osc = std::sqrt(rec.indicators.total_osc_sq());
    rec.graph_norm = graph_norm(rec.solution);
    const double u_norm = m_norm(rec.complex->m1, rec.solution.u.coeffs);
    const FormVector du = discrete_codifferential(rec.solution.u);
    rec.delta_u_ratio = u_norm > 0.0 ? m_norm(rec.complex->m0, du.coeffs) / u_norm : 0.0;

    if (rec.eta_total <= cfg.tol) {
      run.status = RunStatus::converged;
      run.levels.push_back(std::move(rec));
      break;
    }
    if (l + 1 >= cfg.max_iterations) {
      run.status = RunStatus::budget_iterations;
      run.levels.push_back(std::move(rec));
      break;
    }

    std::shared_ptr<const Mesh> next;
    if (cfg.uniform) {
      std::vector<int> all(mesh->n_triangles());
      std::iota(all.begin(), all.end(), 0);
      rec.marks.combined = make_mark_set(all, MarkProvenance::uniform);
      rec.marks.sigma = rec.marks.combined;
      rec.marks.total = rec.marks.combined;
      next = std::make_shared<const Mesh>(refine_uniform(*mesh, cfg.uniform_rounds));
    } else {
      rec.marks = dual_mark(rec.indicators, cfg.theta, cfg.theta_sigma);
      if (cfg.inject_marking_fault && !rec.marks.total.empty()) {
        // Fault-injection control: mark the total set without its last
        // element and nothing else.
        auto cut = rec.marks.total.elements;
        const auto order = descending_order(rec.indicators.eta_total_sq);
        const int drop = order[rec.marks.total.size() - 1];
        cut.erase(std::find(cut.begin(), cut.end(), drop));
        rec.marks.combined = make_mark_set(cut, MarkProvenance::combined);
      }
      rec.bulk_sigma_ok = bulk_holds(rec.indicators.eta_sigma_sq, rec.marks.combined.elements, theta_sigma);
      rec.bulk_total_ok = bulk_holds(rec.indicators.eta_total_sq, rec.marks.combined.elements, cfg.theta);
      if (!(rec.bulk_sigma_ok && rec.bulk_total_ok) && !cfg.inject_marking_fault)
        throw MarkingError("bulk criterion violated at level " + std::to_string(l));
      next = std::make_shared<const Mesh>(mesh->bisect(rec.marks.combined));
    }
    rec.marked = true;
    run.levels.push_back(std::move(rec));
    if (count_dofs(*next) > cfg.max_dofs) {
      run.status = RunStatus::budget_dofs;
      break;
    }
    mesh = std::move(next);
  }
  analyze_run(run, problem);
  return run;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y, int* used)
{
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (std::size_t i = 0; i < std::min(x.size(), y.size()); ++i) {
    if (!(x[i] > 0.0 && y[i] > 0.0) || !std::isfinite(x[i]) || !std::isfinite(y[i])) continue;
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++n;
  }
  if (used) *used = n;
  const double den = n * sxx - sx * sx;
  if (n < 2 || den == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return (n * sxy - sx * sy) / den;
}

void analyze_run(RunReport& run, const Problem& problem)
{
  auto& levels = run.levels;
  if (levels.empty()) return;
  const auto& cfg = run.config;
  const int nl = static_cast<int>(levels.size());

  if (problem.has_exact()) {
    run.error_source = "exact";
    for (auto& rec : levels) {
      const auto e = eval_error(problem, rec.solution.sigma, rec.solution.u, cfg.quad_degree);
      rec.energy_error = e.energy;
      rec.sigma_error = e.sigma_part;
      rec.u_error = e.u_part;
    }
  }

  // Squared graph-norm distance of consecutive sigma iterates, ||d(sigma_{i+1} - sigma_i)||^2.
  std::vector<double> sigma_step(nl > 0 ? nl - 1 : 0, 0.0);
  for (int l = 0; l + 1 < nl; ++l) {
    const auto& fine = levels[l + 1];
    const auto p = prolongation(*levels[l].complex, *fine.complex, fine.mesh->parent());
    const Vector ds = fine.solution.sigma.coeffs - p.p0 * levels[l].solution.sigma.coeffs;
    const Vector g = fine.complex->d0 * ds;
    sigma_step[l] = g.dot(fine.complex->m1 * g);
  }

  if (cfg.reference_rounds > 0) {
    auto ref_mesh = std::make_shared<const Mesh>(refine_uniform(*levels.back().mesh, cfg.reference_rounds));
    auto ref_cx = build_complex(ref_mesh);
    const auto sys = assemble(ref_cx, problem.f, cfg.variant, cfg.quad_degree, cfg.threads);
    SolveOptions opts;
    opts.tol = cfg.solver_tol;
    opts.project_rhs = cfg.project_rhs;
    const auto ref = solve(sys, opts);
    run.has_reference = true;
    run.reference_dofs = ref_cx->dim(0) + ref_cx->dim(1);

    const SparseMatrix lap = ref_cx->d0.transpose() * ref_cx->m1 * ref_cx->d0;
    const SparseMatrix curl = ref_cx->d1.transpose() * ref_cx->m2 * ref_cx->d1;
    auto energy = [](const SparseMatrix& a, const Vector& x) { return std::max(0.0, x.dot(a * x)); };

    std::vector<Vector> sig(nl), uu(nl);
    std::vector<int> anc = ref_mesh->parent();
    for (int l = nl - 1; l >= 0; --l) {
      const auto p = prolongation(*levels[l].complex, *ref_cx, anc);
      sig[l] = p.p0 * levels[l].solution.sigma.coeffs;
      uu[l] = p.p1 * levels[l].solution.u.coeffs;
      if (l > 0) {
        const auto& parent = levels[l].mesh->parent();
        for (int& t : anc) t = parent[t];
      }
    }
    std::vector<double> e2(nl);
    for (int l = 0; l < nl; ++l) {
      const double es = energy(lap, ref.sigma.coeffs - sig[l]);
      const double eu = energy(curl, ref.u.coeffs - uu[l]);
      levels[l].ref_sigma_error = std::sqrt(es);
      levels[l].ref_u_error = std::sqrt(eu);
      levels[l].ref_error = std::sqrt(es + eu);
      e2[l] = es + eu;
      if (!problem.has_exact()) {
        levels[l].energy_error = levels[l].ref_error;
        levels[l].sigma_error = levels[l].ref_sigma_error;
        levels[l].u_error = levels[l].ref_u_error;
      }
    }
    if (!problem.has_exact()) run.error_source = "reference";

    for (int l = 0; l < nl; ++l) {
      for (int m = 1; m <= 5 && l + m < nl; ++m) {
        const int k = l + m;
        const Vector ds = sig[k] - sig[l];
        const Vector du = uu[k] - uu[l];
        PairRecord pr;
        pr.l = l;
        pr.m = m;
        pr.h = levels[k].h_max;
        const double du2 = energy(curl, du);
        const double big_e2 = energy(lap, ds) + du2;
        pr.big_e = std::sqrt(big_e2);
        pr.cross = (ref.u.coeffs - uu[k]).dot(curl * du);
        const double den = levels[k].ref_sigma_error * std::sqrt(du2);
        pr.ratio = den > 0.0 ? std::abs(pr.cross) / den : 0.0;
        const double eta2 = levels[l].eta_total * levels[l].eta_total;
        const double denom = big_e2 + eta2;
        pr.eps = denom > 0.0 ? std::max(0.0, (e2[k] - e2[l] + big_e2) / denom) : 0.0;
        run.pairs.push_back(pr);
      }
    }
  }
  if (run.error_source.empty()) run.error_source = "none";

  for (auto& rec : levels) {
    if (!std::isfinite(rec.energy_error)) continue;
    if (rec.eta_total > 0.0)
      rec.effectivity = rec.energy_error / rec.eta_total;
    else
      rec.effectivity = rec.energy_error > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
  }

  // Contraction of eta_sigma^2 over windows of m levels.
  std::vector<double> idx(nl), es2(nl);
  for (int l = 0; l < nl; ++l) {
    idx[l] = l;
    es2[l] = levels[l].eta_sigma * levels[l].eta_sigma;
  }
  double slope = std::numeric_limits<double>::quiet_NaN();
  {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (int l = 0; l < nl; ++l) {
      if (!(es2[l] > 0.0)) continue;
      sx += l;
      sy += std::log(es2[l]);
      sxx += double(l) * l;
      sxy += l * std::log(es2[l]);
      ++n;
    }
    if (n >= 2 && n * sxx - sx * sx != 0.0) slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  }
  for (int m = 1; m <= 5; ++m) {
    ContractionFit fit;
    fit.m = m;
    for (int l = 0; l + m < nl; ++l) {
      ++fit.windows;
      const double r = es2[l] > 0.0 ? es2[l + m] / es2[l] : (es2[l + m] > 0.0 ? INFINITY : 0.0);
      fit.factor = std::max(fit.factor, r);
    }
    fit.lsq_factor = std::exp(m * slope);
    if (fit.windows > 0) run.contraction.push_back(fit);
  }
  for (double q : {0.25, 0.5, 0.75, 0.9}) {
    PerturbationFit pf;
    pf.q_c = q;
    for (int i = 0; i + 1 < nl; ++i) {
      const double excess = es2[i + 1] - q * es2[i];
      if (excess <= 0.0) continue;
      pf.c_theta = std::max(pf.c_theta, sigma_step[i] > 0.0 ? excess / sigma_step[i] : INFINITY);
    }
    run.perturbation.push_back(pf);
  }

  // Composite e^2 + alpha eta^2 along levels 0, m, 2m, ...
  std::vector<double> err2(nl), eta2(nl);
  bool have_err = true;
  for (int l = 0; l < nl; ++l) {
    err2[l] = levels[l].energy_error * levels[l].energy_error;
    eta2[l] = levels[l].eta_total * levels[l].eta_total;
    have_err = have_err && std::isfinite(err2[l]);
  }
  if (have_err) {
    for (int m = 1; m <= 5; ++m) {
      CompositeFit best;
      best.m = m;
      best.windows = (nl - 1) / m;
      if (best.windows < 2) continue;
      for (int k = -40; k <= 40; ++k) {
        const double alpha = std::pow(10.0, 0.1 * k);
        double rho = 0.0;
        for (int j = 0; (j + 1) * m < nl; ++j) {
          const double a = err2[j * m] + alpha * eta2[j * m];
          const double b = err2[(j + 1) * m] + alpha * eta2[(j + 1) * m];
          rho = std::max(rho, a > 0.0 ? b / a : 0.0);
        }
        if (rho < best.rho) {
          best.rho = rho;
          best.alpha = alpha;
        }
      }
      run.composite.push_back(best);
    }
  }

  std::vector<double> n(nl), h(nl), err(nl), eta(nl), es(nl);
  for (int l = 0; l < nl; ++l) {
    n[l] = static_cast<double>(levels[l].n_dofs);
    h[l] = levels[l].h_max;
    err[l] = levels[l].energy_error;
    eta[l] = levels[l].eta_total;
    es[l] = levels[l].eta_sigma;
  }
  auto add_rate = [&](const std::string& q, const std::string& against, const std::vector<double>& x,
                      const std::vector<double>& y) {
    RateFit r;
    r.quantity = q;
    r.against = against;
    r.exponent = loglog_slope(x, y, &r.points);
    run.rates.push_back(r);
  };
  add_rate("energy_error", "N", n, err);
  add_rate("eta_total", "N", n, eta);
  add_rate("eta_sigma", "N", n, es);
  add_rate("energy_error", "h", h, err);
  add_rate("eta_total", "h", h, eta);
}

}  // namespace amfem
