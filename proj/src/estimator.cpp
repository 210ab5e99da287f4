#include "amfem/estimator.hpp"

#include "amfem/parallel.hpp"
#include "amfem/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

namespace amfem {

double sorted_sum(std::vector<double> v)
{
  std::sort(v.begin(), v.end(), [](double a, double b) { return std::abs(a) < std::abs(b); });
  double s = 0.0;
  for (double x : v) s += x;
  return s;
}

double IndicatorField::total_eta_sq() const { return sorted_sum(eta_total_sq); }
double IndicatorField::total_eta_sigma_sq() const { return sorted_sum(eta_sigma_sq); }
double IndicatorField::total_osc_sq() const { return sorted_sum(osc_sq); }

namespace {

double sq(double x) { return x * x; }

struct EdgeJumps {
  double sigma = 0.0;  // h_e ||[(f - grad sigma_h) . n]||^2
  double rot = 0.0;    // h_e ||[rot u_h]||^2
};

}  // namespace

IndicatorField estimate(const Complex& cx, const FormVector& sigma, const FormVector& u, const Problem& problem,
                        int quad_degree, int threads)
{
  const Mesh& mesh = *cx.mesh;
  const std::size_t nt = mesh.n_triangles();
  const std::size_t ne = mesh.n_edges();
  const auto& rule = triangle_rule(quad_degree);
  const auto& line = line_rule(quad_degree);

  std::vector<Vec2> grad_sigma(nt);
  std::vector<double> rot_u(nt);
  for (std::size_t t = 0; t < nt; ++t) {
    grad_sigma[t] = grad_p1(sigma, static_cast<int>(t));
    rot_u[t] = rot_whitney(u, static_cast<int>(t));
  }

  std::vector<EdgeJumps> jumps(ne);
  parallel_for(ne, threads, [&](std::size_t e) {
    if (mesh.boundary_edge()[e]) return;
    const auto& ev = mesh.edges()[e];
    const Point a = mesh.vertices()[ev[0]];
    const Point b = mesh.vertices()[ev[1]];
    const double len = mesh.edge_length(static_cast<int>(e));
    const Vec2 n{(b.y - a.y) / len, -(b.x - a.x) / len};
    const int t1 = mesh.edge_triangles()[e][0];
    const int t2 = mesh.edge_triangles()[e][1];
    const Point c1 = mesh.centroid(t1);
    const Point c2 = mesh.centroid(t2);
    double js = 0.0;
    for (const auto& q : line) {
      const Point x{a.x + q.t * (b.x - a.x), a.y + q.t * (b.y - a.y)};
      const Vec2 f1 = problem.f(x, c1);
      const Vec2 f2 = problem.f(x, c2);
      const double jump = (f1[0] - grad_sigma[t1][0] - f2[0] + grad_sigma[t2][0]) * n[0] +
                          (f1[1] - grad_sigma[t1][1] - f2[1] + grad_sigma[t2][1]) * n[1];
      js += q.weight * sq(jump);
    }
    jumps[e].sigma = len * len * js;
    jumps[e].rot = len * len * sq(rot_u[t1] - rot_u[t2]);
  });

  IndicatorField out;
  out.quad_degree = quad_degree;
  out.eta_sigma_sq.assign(nt, 0.0);
  out.eta_total_sq.assign(nt, 0.0);
  out.osc_sq = oscillation(mesh, problem, quad_degree, threads);
  parallel_for(nt, threads, [&](std::size_t i) {
    const int t = static_cast<int>(i);
    const auto g = element_geometry(mesh, t);
    const Point side = mesh.centroid(t);
    // At lowest order grad sigma_h and rot u_h are constant on K, so
    // div grad sigma_h and rot* rot u_h vanish element-wise.
    const double div_grad_sigma = 0.0;
    const Vec2 rot_star_rot_u{0.0, 0.0};
    double div_res = 0.0;
    double vol_res = 0.0;
    for (const auto& q : rule) {
      const Point x = g.map(q.bary);
      div_res += q.weight * sq(problem.div_f(x, side) - div_grad_sigma);
      const Vec2 fv = problem.f(x, side);
      vol_res += q.weight * (sq(fv[0] - grad_sigma[t][0] - rot_star_rot_u[0]) +
                             sq(fv[1] - grad_sigma[t][1] - rot_star_rot_u[1]));
    }
    const double h2 = g.area;
    double es = h2 * g.area * div_res;
    double et = h2 * g.area * vol_res;
    for (int k = 0; k < 3; ++k) {
      const int e = mesh.triangle_edges()[t][k];
      if (mesh.boundary_edge()[e]) continue;
      es += 0.5 * jumps[e].sigma;
      et += 0.5 * jumps[e].rot;
    }
    out.eta_sigma_sq[i] = es;
    out.eta_total_sq[i] = es + et;
  });
  return out;
}

std::vector<double> oscillation(const Mesh& mesh, const Problem& problem, int quad_degree, int threads)
{
  const auto& rule = triangle_rule(quad_degree);
  std::vector<double> out(mesh.n_triangles(), 0.0);
  parallel_for(mesh.n_triangles(), threads, [&](std::size_t i) {
    const int t = static_cast<int>(i);
    const auto g = element_geometry(mesh, t);
    const Point side = mesh.centroid(t);
    std::vector<Vec2> fq(rule.size());
    std::vector<double> dq(rule.size());
    Vec2 mean{0.0, 0.0};
    Eigen::Vector3d rhs = Eigen::Vector3d::Zero();
    for (std::size_t k = 0; k < rule.size(); ++k) {
      const Point x = g.map(rule[k].bary);
      fq[k] = problem.f(x, side);
      dq[k] = problem.div_f(x, side);
      mean[0] += rule[k].weight * fq[k][0];
      mean[1] += rule[k].weight * fq[k][1];
      for (int j = 0; j < 3; ++j) rhs[j] += rule[k].weight * dq[k] * rule[k].bary[j];
    }
    // Element mass matrix of the barycentric basis, divided by |K|.
    Eigen::Matrix3d mass;
    mass << 2, 1, 1, 1, 2, 1, 1, 1, 2;
    mass /= 12.0;
    const Eigen::Vector3d c = mass.ldlt().solve(rhs);
    double r0 = 0.0;
    double r1 = 0.0;
    for (std::size_t k = 0; k < rule.size(); ++k) {
      r0 += rule[k].weight * (sq(fq[k][0] - mean[0]) + sq(fq[k][1] - mean[1]));
      const double proj = c[0] * rule[k].bary[0] + c[1] * rule[k].bary[1] + c[2] * rule[k].bary[2];
      r1 += rule[k].weight * sq(dq[k] - proj);
    }
    out[i] = g.area * g.area * (r0 + r1);
  });
  return out;
}

double effectivity(double err, const IndicatorField& ind)
{
  const double eta = std::sqrt(ind.total_eta_sq());
  if (eta == 0.0) {
    if (err > 0.0) throw ReliabilityViolation("estimator vanishes while the error is " + std::to_string(err));
    return 0.0;
  }
  return err / eta;
}

void write_indicators_csv(std::ostream& out, const IndicatorField& ind)
{
  out << "element_id,eta_total_sq,eta_sigma_sq,osc_sq\n";
  out.precision(17);
  for (std::size_t t = 0; t < ind.eta_total_sq.size(); ++t)
    out << t << ',' << ind.eta_total_sq[t] << ',' << ind.eta_sigma_sq[t] << ',' << ind.osc_sq[t] << '\n';
}

}  // namespace amfem
