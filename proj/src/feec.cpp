#include "amfem/feec.hpp"

#include "amfem/quadrature.hpp"

#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <random>

namespace amfem {

int Complex::dim(int degree) const
{
  switch (degree) {
    case 0: return static_cast<int>(dof_vertex.size());
    case 1: return static_cast<int>(dof_edge.size());
    case 2: return static_cast<int>(mesh->n_triangles());
    default: throw std::invalid_argument("form degree must be 0, 1 or 2");
  }
}

FormVector::FormVector(int k, Vector c, ComplexPtr cx) : degree(k), coeffs(std::move(c)), complex(std::move(cx))
{
  if (!complex) throw std::invalid_argument("FormVector without complex");
  if (coeffs.size() != complex->dim(k)) throw std::invalid_argument("FormVector length does not match the complex");
}

FormVector FormVector::zero(int k, ComplexPtr cx)
{
  const int n = cx->dim(k);
  return FormVector(k, Vector::Zero(n), std::move(cx));
}

ElementGeometry element_geometry(const Mesh& mesh, int t)
{
  ElementGeometry g;
  const auto& v = mesh.triangles()[t];
  for (int i = 0; i < 3; ++i) g.p[i] = mesh.vertices()[v[i]];
  const double det = (g.p[1].x - g.p[0].x) * (g.p[2].y - g.p[0].y) - (g.p[1].y - g.p[0].y) * (g.p[2].x - g.p[0].x);
  g.area = 0.5 * std::abs(det);
  // grad lambda_i is the inward normal of the opposite edge over twice the area.
  for (int i = 0; i < 3; ++i) {
    const Point& a = g.p[(i + 1) % 3];
    const Point& b = g.p[(i + 2) % 3];
    g.grad_lambda[i] = {(a.y - b.y) / det, (b.x - a.x) / det};
  }
  return g;
}

Point ElementGeometry::map(const std::array<double, 3>& bary) const
{
  return {bary[0] * p[0].x + bary[1] * p[1].x + bary[2] * p[2].x,
          bary[0] * p[0].y + bary[1] * p[1].y + bary[2] * p[2].y};
}

std::array<double, 3> ElementGeometry::barycentric(const Point& x) const
{
  std::array<double, 3> b{};
  for (int i = 0; i < 3; ++i) {
    const Point& a = p[(i + 1) % 3];
    b[i] = grad_lambda[i][0] * (x.x - a.x) + grad_lambda[i][1] * (x.y - a.y);
  }
  return b;
}

namespace {

double dot(const Vec2& a, const Vec2& b) { return a[0] * b[0] + a[1] * b[1]; }

// Local vertex indices (tail, head) of local edge i in global orientation.
std::array<int, 2> oriented_local_edge(const Mesh& mesh, int t, int i)
{
  const auto& v = mesh.triangles()[t];
  const int a = (i + 1) % 3;
  const int b = (i + 2) % 3;
  return v[a] < v[b] ? std::array<int, 2>{a, b} : std::array<int, 2>{b, a};
}

Vec2 whitney_local(const ElementGeometry& g, std::array<int, 2> ab, const std::array<double, 3>& bary)
{
  const auto& ga = g.grad_lambda[ab[0]];
  const auto& gb = g.grad_lambda[ab[1]];
  return {bary[ab[0]] * gb[0] - bary[ab[1]] * ga[0], bary[ab[0]] * gb[1] - bary[ab[1]] * ga[1]};
}

double lambda_product(int i, int j) { return (i == j ? 2.0 : 1.0) / 12.0; }

}  // namespace

ComplexPtr build_complex(const Mesh& mesh) { return build_complex(std::make_shared<const Mesh>(mesh)); }

ComplexPtr build_complex(std::shared_ptr<const Mesh> mesh_ptr)
{
  auto cx = std::make_shared<Complex>();
  cx->mesh = std::move(mesh_ptr);
  const Mesh& mesh = *cx->mesh;

  cx->vertex_dof.assign(mesh.n_vertices(), -1);
  for (std::size_t v = 0; v < mesh.n_vertices(); ++v) {
    if (mesh.boundary_vertex()[v]) continue;
    cx->vertex_dof[v] = static_cast<int>(cx->dof_vertex.size());
    cx->dof_vertex.push_back(static_cast<int>(v));
  }
  if (cx->dof_vertex.empty()) throw EmptySpaceError("empty space: dim V0 = 0 (no interior vertices)");
  cx->edge_dof.assign(mesh.n_edges(), -1);
  for (std::size_t e = 0; e < mesh.n_edges(); ++e) {
    if (mesh.boundary_edge()[e]) continue;
    cx->edge_dof[e] = static_cast<int>(cx->dof_edge.size());
    cx->dof_edge.push_back(static_cast<int>(e));
  }
  const int n0 = cx->dim(0);
  const int n1 = cx->dim(1);
  const int n2 = cx->dim(2);

  using Triplet = Eigen::Triplet<double>;
  std::vector<Triplet> d0, d1, m0, m1, m2;
  for (int k = 0; k < n1; ++k) {
    const auto& ev = mesh.edges()[cx->dof_edge[k]];
    if (cx->vertex_dof[ev[0]] >= 0) d0.emplace_back(k, cx->vertex_dof[ev[0]], -1.0);
    if (cx->vertex_dof[ev[1]] >= 0) d0.emplace_back(k, cx->vertex_dof[ev[1]], 1.0);
  }
  for (int t = 0; t < n2; ++t) {
    const auto& tv = mesh.triangles()[t];
    const auto& te = mesh.triangle_edges()[t];
    const auto g = element_geometry(mesh, t);

    for (int i = 0; i < 3; ++i) {
      const int k = cx->edge_dof[te[i]];
      if (k >= 0) d1.emplace_back(t, k, static_cast<double>(mesh.edge_sign(t, i)));
    }
    for (int i = 0; i < 3; ++i) {
      const int r = cx->vertex_dof[tv[i]];
      if (r < 0) continue;
      for (int j = i; j < 3; ++j) {
        const int c = cx->vertex_dof[tv[j]];
        if (c < 0) continue;
        const double val = g.area * lambda_product(i, j);
        m0.emplace_back(r, c, val);
        if (r != c) m0.emplace_back(c, r, val);
      }
    }
    std::array<std::array<int, 2>, 3> ab;
    for (int i = 0; i < 3; ++i) ab[i] = oriented_local_edge(mesh, t, i);
    for (int i = 0; i < 3; ++i) {
      const int r = cx->edge_dof[te[i]];
      if (r < 0) continue;
      for (int j = i; j < 3; ++j) {
        const int c = cx->edge_dof[te[j]];
        if (c < 0) continue;
        const auto [a, b] = ab[i];
        const auto [p, q] = ab[j];
        const auto& G = g.grad_lambda;
        const double val = g.area * (lambda_product(a, p) * dot(G[b], G[q]) - lambda_product(a, q) * dot(G[b], G[p]) -
                                     lambda_product(b, p) * dot(G[a], G[q]) + lambda_product(b, q) * dot(G[a], G[p]));
        m1.emplace_back(r, c, val);
        if (r != c) m1.emplace_back(c, r, val);
      }
    }
    m2.emplace_back(t, t, 1.0 / g.area);
  }
  cx->d0.resize(n1, n0);
  cx->d0.setFromTriplets(d0.begin(), d0.end());
  cx->d1.resize(n2, n1);
  cx->d1.setFromTriplets(d1.begin(), d1.end());
  cx->m0.resize(n0, n0);
  cx->m0.setFromTriplets(m0.begin(), m0.end());
  cx->m1.resize(n1, n1);
  cx->m1.setFromTriplets(m1.begin(), m1.end());
  cx->m2.resize(n2, n2);
  cx->m2.setFromTriplets(m2.begin(), m2.end());
  return cx;
}

FormVector apply_d(const FormVector& x)
{
  switch (x.degree) {
    case 0: return FormVector(1, x.complex->d0 * x.coeffs, x.complex);
    case 1: return FormVector(2, x.complex->d1 * x.coeffs, x.complex);
    default: throw std::invalid_argument("apply_d: no exterior derivative of a 2-form in 2D");
  }
}

FormVector discrete_codifferential(const FormVector& u)
{
  if (u.degree != 1) throw std::invalid_argument("discrete_codifferential expects a 1-form");
  const Complex& cx = *u.complex;
  Eigen::SimplicialLDLT<SparseMatrix> m0(cx.m0);
  if (m0.info() != Eigen::Success) throw std::runtime_error("discrete_codifferential: M0 factorization failed");
  Vector rhs = cx.d0.transpose() * (cx.m1 * u.coeffs);
  Vector s = m0.solve(rhs);
  // One step of iterative refinement keeps the relative residual near 1e-15.
  s += m0.solve(rhs - cx.m0 * s);
  return FormVector(0, std::move(s), u.complex);
}

HodgeSplit hodge_split(const FormVector& v)
{
  if (v.degree != 1) throw std::invalid_argument("hodge_split expects a 1-form");
  const Complex& cx = *v.complex;
  const SparseMatrix lap = cx.d0.transpose() * cx.m1 * cx.d0;
  Eigen::SimplicialLDLT<SparseMatrix> solver(lap);
  if (solver.info() != Eigen::Success) throw std::runtime_error("hodge_split: factorization failed");
  const Vector rhs = cx.d0.transpose() * (cx.m1 * v.coeffs);
  Vector phi = solver.solve(rhs);
  phi += solver.solve(rhs - lap * phi);
  Vector z = cx.d0 * phi;
  Vector w = v.coeffs - z;
  return HodgeSplit{FormVector(1, std::move(z), v.complex), FormVector(1, std::move(w), v.complex),
                    FormVector(0, std::move(phi), v.complex)};
}

namespace {

// Smallest eigenvalue of K x = lambda M x by block inverse iteration, where
// solve_a applies A^{-1} for an SPD A that agrees with K on the invariant
// subspace selected by `project`.
template <typename SolveA, typename Project>
double smallest_eigenvalue(const SparseMatrix& k, const SparseMatrix& m, SolveA&& solve_a, Project&& project,
                           int subspace_dim, double rel_tol, unsigned seed, int& iterations)
{
  const int n = static_cast<int>(k.rows());
  const int b = std::max(1, std::min(6, subspace_dim));
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Eigen::MatrixXd x(n, b);
  for (int j = 0; j < b; ++j)
    for (int i = 0; i < n; ++i) x(i, j) = dist(rng);
  project(x);

  double lambda = std::numeric_limits<double>::infinity();
  const int max_iter = 2000;
  for (iterations = 1; iterations <= max_iter; ++iterations) {
    Eigen::MatrixXd y = solve_a(Eigen::MatrixXd(m * x));
    project(y);
    const Eigen::MatrixXd kr = y.transpose() * (k * y);
    const Eigen::MatrixXd mr = y.transpose() * (m * y);
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (kr + kr.transpose()),
                                                                 0.5 * (mr + mr.transpose()));
    if (es.info() != Eigen::Success) throw std::runtime_error("Rayleigh-Ritz eigensolve failed");
    x = y * es.eigenvectors();
    const double next = es.eigenvalues()(0);
    const bool done = std::abs(next - lambda) <= rel_tol * std::abs(next);
    lambda = next;
    if (done && iterations > 3) break;
  }
  if (iterations > max_iter) throw std::runtime_error("eigensolve did not converge");
  return lambda;
}

}  // namespace

PoincareConstants discrete_poincare_constants(const Complex& cx, double rel_tol, unsigned seed)
{
  PoincareConstants out;
  const SparseMatrix lap = cx.d0.transpose() * cx.m1 * cx.d0;
  Eigen::SimplicialLDLT<SparseMatrix> lap_solver(lap);
  if (lap_solver.info() != Eigen::Success) throw std::runtime_error("poincare: stiffness factorization failed");

  // d on K_h. The gradient part is lifted by M1 D0 W D0^T M1 (W = diag(M0)^{-1}),
  // which leaves the action on K_h untouched and makes A definite.
  const SparseMatrix curl = cx.d1.transpose() * cx.m2 * cx.d1;
  Vector w = cx.m0.diagonal().cwiseInverse();
  const SparseMatrix m1d0 = cx.m1 * cx.d0;
  const SparseMatrix m1d0_t = m1d0.transpose();
  const SparseMatrix lift = m1d0 * w.asDiagonal() * m1d0_t;
  const SparseMatrix a = curl + lift;
  Eigen::SimplicialLDLT<SparseMatrix> a_solver(a);
  if (a_solver.info() != Eigen::Success) throw std::runtime_error("poincare: augmented operator factorization failed");

  auto project_kh = [&](Eigen::MatrixXd& x) {
    const Eigen::MatrixXd rhs = cx.d0.transpose() * (cx.m1 * x);
    Eigen::MatrixXd phi = lap_solver.solve(rhs);
    phi += lap_solver.solve(rhs - lap * phi);
    x -= cx.d0 * phi;
  };
  const int dim_kh = cx.dim(1) - cx.dim(0);
  if (dim_kh <= 0) throw std::runtime_error("poincare: K_h is trivial");
  int it_d = 0;
  out.lambda_d = smallest_eigenvalue(
      curl, cx.m1, [&](const Eigen::MatrixXd& r) { return Eigen::MatrixXd(a_solver.solve(r)); }, project_kh, dim_kh,
      rel_tol, seed, it_d);

  int it_delta = 0;
  out.lambda_delta = smallest_eigenvalue(
      lap, cx.m0, [&](const Eigen::MatrixXd& r) { return Eigen::MatrixXd(lap_solver.solve(r)); },
      [](Eigen::MatrixXd&) {}, cx.dim(0), rel_tol, seed + 1, it_delta);

  out.cp_d = 1.0 / std::sqrt(out.lambda_d);
  out.cp_delta = 1.0 / std::sqrt(out.lambda_delta);
  out.iterations = it_d + it_delta;
  return out;
}

double eval_p1(const FormVector& sigma, int t, const std::array<double, 3>& bary)
{
  const Complex& cx = *sigma.complex;
  const auto& v = cx.mesh->triangles()[t];
  double s = 0.0;
  for (int i = 0; i < 3; ++i) {
    const int k = cx.vertex_dof[v[i]];
    if (k >= 0) s += sigma.coeffs[k] * bary[i];
  }
  return s;
}

Vec2 grad_p1(const FormVector& sigma, int t)
{
  const Complex& cx = *sigma.complex;
  const auto g = element_geometry(*cx.mesh, t);
  const auto& v = cx.mesh->triangles()[t];
  Vec2 out{0.0, 0.0};
  for (int i = 0; i < 3; ++i) {
    const int k = cx.vertex_dof[v[i]];
    if (k < 0) continue;
    out[0] += sigma.coeffs[k] * g.grad_lambda[i][0];
    out[1] += sigma.coeffs[k] * g.grad_lambda[i][1];
  }
  return out;
}

Vec2 eval_whitney(const FormVector& u, int t, const std::array<double, 3>& bary)
{
  const Complex& cx = *u.complex;
  const Mesh& mesh = *cx.mesh;
  const auto g = element_geometry(mesh, t);
  Vec2 out{0.0, 0.0};
  for (int i = 0; i < 3; ++i) {
    const int k = cx.edge_dof[mesh.triangle_edges()[t][i]];
    if (k < 0) continue;
    const Vec2 w = whitney_local(g, oriented_local_edge(mesh, t, i), bary);
    out[0] += u.coeffs[k] * w[0];
    out[1] += u.coeffs[k] * w[1];
  }
  return out;
}

double rot_whitney(const FormVector& u, int t)
{
  const Complex& cx = *u.complex;
  const Mesh& mesh = *cx.mesh;
  double circulation = 0.0;
  for (int i = 0; i < 3; ++i) {
    const int k = cx.edge_dof[mesh.triangle_edges()[t][i]];
    if (k >= 0) circulation += mesh.edge_sign(t, i) * u.coeffs[k];
  }
  return circulation / mesh.area(t);
}

Vec2 whitney_basis(const Mesh& mesh, int e, int t, const std::array<double, 3>& bary)
{
  for (int i = 0; i < 3; ++i) {
    if (mesh.triangle_edges()[t][i] == e) {
      return whitney_local(element_geometry(mesh, t), oriented_local_edge(mesh, t, i), bary);
    }
  }
  throw std::invalid_argument("whitney_basis: edge is not on the triangle");
}

std::array<Vec2, 3> local_whitney(const Mesh& mesh, int t, const ElementGeometry& g,
                                  const std::array<double, 3>& bary)
{
  std::array<Vec2, 3> out;
  for (int i = 0; i < 3; ++i) out[i] = whitney_local(g, oriented_local_edge(mesh, t, i), bary);
  return out;
}

FormVector interpolate_vertex(ComplexPtr cx, const std::function<double(Point)>& phi)
{
  Vector c(cx->dim(0));
  for (int k = 0; k < c.size(); ++k) c[k] = phi(cx->mesh->vertices()[cx->dof_vertex[k]]);
  return FormVector(0, std::move(c), std::move(cx));
}

FormVector interpolate_edge(ComplexPtr cx, const std::function<Vec2(Point)>& g, int quad_degree)
{
  const auto& rule = line_rule(quad_degree);
  Vector c(cx->dim(1));
  for (int k = 0; k < c.size(); ++k) {
    const auto& ev = cx->mesh->edges()[cx->dof_edge[k]];
    const Point a = cx->mesh->vertices()[ev[0]];
    const Point b = cx->mesh->vertices()[ev[1]];
    const Vec2 tangent{b.x - a.x, b.y - a.y};
    double s = 0.0;
    for (const auto& q : rule) {
      const Vec2 val = g({a.x + q.t * tangent[0], a.y + q.t * tangent[1]});
      s += q.weight * dot(val, tangent);
    }
    c[k] = s;
  }
  return FormVector(1, std::move(c), std::move(cx));
}

Prolongation prolongation(const Complex& coarse, const Complex& fine, const std::vector<int>& fine_to_coarse,
                          bool require_nested)
{
  const Mesh& fm = *fine.mesh;
  const Mesh& cm = *coarse.mesh;
  if (fine_to_coarse.size() != fm.n_triangles()) throw NotNestedError("prolongation: ancestor map has wrong size");
  std::vector<ElementGeometry> cgeom(cm.n_triangles());
  std::vector<bool> have(cm.n_triangles(), false);
  auto coarse_geom = [&](int k) -> const ElementGeometry& {
    if (!have[k]) {
      cgeom[k] = element_geometry(cm, k);
      have[k] = true;
    }
    return cgeom[k];
  };
  const double eps = 1e-10;
  std::vector<int> vertex_tri(fm.n_vertices(), -1);
  for (std::size_t t = 0; t < fm.n_triangles(); ++t) {
    const int k = fine_to_coarse[t];
    if (k < 0 || static_cast<std::size_t>(k) >= cm.n_triangles()) throw NotNestedError("ancestor index out of range");
    for (int v : fm.triangles()[t]) {
      if (vertex_tri[v] < 0) vertex_tri[v] = static_cast<int>(t);
      if (require_nested) {
        const auto b = coarse_geom(k).barycentric(fm.vertices()[v]);
        if (*std::min_element(b.begin(), b.end()) < -eps) {
          throw NotNestedError("meshes are not nested: fine triangle " + std::to_string(t) +
                               " is not contained in coarse triangle " + std::to_string(k));
        }
      }
    }
  }

  using Triplet = Eigen::Triplet<double>;
  std::vector<Triplet> p0, p1, p2;
  for (int r = 0; r < fine.dim(0); ++r) {
    const int v = fine.dof_vertex[r];
    const int k = fine_to_coarse[vertex_tri[v]];
    const auto b = coarse_geom(k).barycentric(fm.vertices()[v]);
    const auto& kv = cm.triangles()[k];
    for (int i = 0; i < 3; ++i) {
      const int c = coarse.vertex_dof[kv[i]];
      if (c >= 0 && b[i] != 0.0) p0.emplace_back(r, c, b[i]);
    }
  }
  for (int r = 0; r < fine.dim(1); ++r) {
    const int e = fine.dof_edge[r];
    const auto& ev = fm.edges()[e];
    const Point a = fm.vertices()[ev[0]];
    const Point b = fm.vertices()[ev[1]];
    const int k = fine_to_coarse[fm.edge_triangles()[e][0]];
    const auto& g = coarse_geom(k);
    const auto bary = g.barycentric({0.5 * (a.x + b.x), 0.5 * (a.y + b.y)});
    const Vec2 tangent{b.x - a.x, b.y - a.y};
    for (int i = 0; i < 3; ++i) {
      const int c = coarse.edge_dof[cm.triangle_edges()[k][i]];
      if (c < 0) continue;
      const double val = dot(whitney_local(g, oriented_local_edge(cm, k, i), bary), tangent);
      if (val != 0.0) p1.emplace_back(r, c, val);
    }
  }
  for (std::size_t t = 0; t < fm.n_triangles(); ++t) {
    const int k = fine_to_coarse[t];
    p2.emplace_back(static_cast<int>(t), k, fm.area(static_cast<int>(t)) / cm.area(k));
  }
  Prolongation p;
  p.p0.resize(fine.dim(0), coarse.dim(0));
  p.p0.setFromTriplets(p0.begin(), p0.end());
  p.p1.resize(fine.dim(1), coarse.dim(1));
  p.p1.setFromTriplets(p1.begin(), p1.end());
  p.p2.resize(fine.dim(2), coarse.dim(2));
  p.p2.setFromTriplets(p2.begin(), p2.end());
  return p;
}

FormVector prolong(const FormVector& x, const Prolongation& p, ComplexPtr fine)
{
  switch (x.degree) {
    case 0: return FormVector(0, p.p0 * x.coeffs, std::move(fine));
    case 1: return FormVector(1, p.p1 * x.coeffs, std::move(fine));
    case 2: return FormVector(2, p.p2 * x.coeffs, std::move(fine));
    default: throw std::invalid_argument("prolong: bad degree");
  }
}

void write_triplets(std::ostream& out, const SparseMatrix& a)
{
  out.precision(17);
  for (int c = 0; c < a.outerSize(); ++c)
    for (SparseMatrix::InnerIterator it(a, c); it; ++it) out << it.row() << ' ' << it.col() << ' ' << it.value() << '\n';
}

}  // namespace amfem
