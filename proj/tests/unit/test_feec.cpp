#include "amfem/feec.hpp"

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

using namespace amfem;

namespace {

std::shared_ptr<const Mesh> shared(Mesh m) { return std::make_shared<const Mesh>(std::move(m)); }

Vector random_vector(int n, unsigned seed)
{
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  Vector v(n);
  for (auto& x : v) x = d(rng);
  return v;
}

// Barycentric gradient of vertex i, computed from scratch.
Vec2 grad_lambda(const std::array<Point, 3>& p, int i)
{
  const Point& a = p[(i + 1) % 3];
  const Point& b = p[(i + 2) % 3];
  const double det = (p[1].x - p[0].x) * (p[2].y - p[0].y) - (p[2].x - p[0].x) * (p[1].y - p[0].y);
  return {(a.y - b.y) / det, (b.x - a.x) / det};
}

std::array<Point, 3> corners(const Mesh& m, int t)
{
  const auto& v = m.triangles()[t];
  return {m.vertices()[v[0]], m.vertices()[v[1]], m.vertices()[v[2]]};
}

// Edge midpoint rule: exact for quadratics on a triangle.
const std::array<std::array<double, 3>, 3> midpoints{{{0.0, 0.5, 0.5}, {0.5, 0.0, 0.5}, {0.5, 0.5, 0.0}}};

}  // namespace

TEST(Complex, DimensionsAndIncidence)
{
  for (const char* name : {"square", "lshape"}) {
    const Mesh m = refine_uniform(builtin_mesh(name), 3);
    const auto cx = build_complex(m);
    const auto met = mesh_metrics(m);
    EXPECT_EQ(cx->dim(0), static_cast<int>(met.n_interior_vertices));
    EXPECT_EQ(cx->dim(1), static_cast<int>(met.n_interior_edges));
    EXPECT_EQ(cx->dim(2), static_cast<int>(met.n_elements));
    const SparseMatrix dd = cx->d1 * cx->d0;
    for (int c = 0; c < dd.outerSize(); ++c)
      for (SparseMatrix::InnerIterator it(dd, c); it; ++it) EXPECT_EQ(it.value(), 0.0);
    for (const SparseMatrix* d : {&cx->d0, &cx->d1})
      for (int c = 0; c < d->outerSize(); ++c)
        for (SparseMatrix::InnerIterator it(*d, c); it; ++it) EXPECT_EQ(std::abs(it.value()), 1.0);
  }
}

TEST(Complex, NoInteriorVertexThrows)
{
  EXPECT_THROW(build_complex(builtin_mesh("square2")), EmptySpaceError);
  EXPECT_THROW(build_complex(builtin_mesh("lshape6")), EmptySpaceError);
}

TEST(Complex, ExactnessByDenseRank)
{
  const auto cx = build_complex(refine_uniform(builtin_mesh("lshape"), 2));
  const Eigen::MatrixXd d0 = Eigen::MatrixXd(cx->d0);
  const Eigen::MatrixXd d1 = Eigen::MatrixXd(cx->d1);
  const auto r0 = Eigen::FullPivLU<Eigen::MatrixXd>(d0).rank();
  const auto r1 = Eigen::FullPivLU<Eigen::MatrixXd>(d1).rank();
  EXPECT_EQ(r0, cx->dim(0));
  EXPECT_EQ(r0 + r1, cx->dim(1));
}

TEST(Complex, MassMatricesAgainstMidpointQuadrature)
{
  const Mesh m = refine_uniform(builtin_mesh("lshape"), 1);
  const auto cx = build_complex(m);
  Eigen::MatrixXd m0 = Eigen::MatrixXd::Zero(cx->dim(0), cx->dim(0));
  Eigen::MatrixXd m1 = Eigen::MatrixXd::Zero(cx->dim(1), cx->dim(1));
  for (std::size_t t = 0; t < m.n_triangles(); ++t) {
    const auto p = corners(m, static_cast<int>(t));
    const double area = m.area(static_cast<int>(t));
    const auto& tv = m.triangles()[t];
    // Whitney function of the edge between local vertices i < j (global order).
    auto whitney = [&](int i, int j, const std::array<double, 3>& lam) {
      if (tv[i] > tv[j]) std::swap(i, j);
      const Vec2 gi = grad_lambda(p, i), gj = grad_lambda(p, j);
      return Vec2{lam[i] * gj[0] - lam[j] * gi[0], lam[i] * gj[1] - lam[j] * gi[1]};
    };
    for (const auto& lam : midpoints) {
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) {
          const int da = cx->vertex_dof[tv[a]], db = cx->vertex_dof[tv[b]];
          if (da >= 0 && db >= 0) m0(da, db) += area / 3 * lam[a] * lam[b];
          const int ea = cx->edge_dof[m.triangle_edges()[t][a]], eb = cx->edge_dof[m.triangle_edges()[t][b]];
          if (ea < 0 || eb < 0) continue;
          const Vec2 wa = whitney((a + 1) % 3, (a + 2) % 3, lam), wb = whitney((b + 1) % 3, (b + 2) % 3, lam);
          m1(ea, eb) += area / 3 * (wa[0] * wb[0] + wa[1] * wb[1]);
        }
    }
  }
  EXPECT_LT((Eigen::MatrixXd(cx->m0) - m0).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_LT((Eigen::MatrixXd(cx->m1) - m1).cwiseAbs().maxCoeff(), 1e-14);
  for (std::size_t t = 0; t < m.n_triangles(); ++t)
    EXPECT_NEAR(cx->m2.coeff(t, t), 1.0 / m.area(static_cast<int>(t)), 1e-12);
  EXPECT_EQ((Eigen::MatrixXd(cx->m1) - Eigen::MatrixXd(cx->m1).transpose()).cwiseAbs().maxCoeff(), 0.0);
}

TEST(Complex, WhitneyDegreesOfFreedom)
{
  // The tangential moment of each Whitney function is 1 on its own edge
  // and 0 on the other edges of the triangle.
  const Mesh m = refine_uniform(builtin_mesh("square"), 1);
  for (int t = 0; t < static_cast<int>(m.n_triangles()); ++t) {
    for (int k = 0; k < 3; ++k) {
      const int e = m.triangle_edges()[t][k];
      for (int j = 0; j < 3; ++j) {
        const auto& ev = m.edges()[m.triangle_edges()[t][j]];
        const Point a = m.vertices()[ev[0]], b = m.vertices()[ev[1]];
        const auto g = element_geometry(m, t);
        const Point mid{0.5 * (a.x + b.x), 0.5 * (a.y + b.y)};
        const Vec2 w = whitney_basis(m, e, t, g.barycentric(mid));
        // Whitney functions have constant tangential trace along edges.
        const double moment = w[0] * (b.x - a.x) + w[1] * (b.y - a.y);
        EXPECT_NEAR(moment, j == k ? 1.0 : 0.0, 1e-13);
      }
    }
  }
}

TEST(Complex, CodifferentialIsAdjoint)
{
  const auto cx = build_complex(refine_uniform(builtin_mesh("lshape"), 2));
  for (unsigned s = 0; s < 100; ++s) {
    const FormVector u(1, random_vector(cx->dim(1), s), cx);
    const Vector tau = random_vector(cx->dim(0), 1000 + s);
    const FormVector du = discrete_codifferential(u);
    const double lhs = du.coeffs.dot(cx->m0 * tau);
    const double rhs = u.coeffs.dot(cx->m1 * (cx->d0 * tau));
    EXPECT_NEAR(lhs, rhs, 1e-10 * std::abs(rhs));
  }
  const FormVector zero = FormVector::zero(1, cx);
  EXPECT_EQ(discrete_codifferential(zero).coeffs.norm(), 0.0);
}

TEST(Complex, HodgeSplit)
{
  const auto cx = build_complex(refine_uniform(builtin_mesh("square"), 3));
  auto mnorm = [&](const Vector& x) { return std::sqrt(x.dot(cx->m1 * x)); };

  const FormVector v(1, random_vector(cx->dim(1), 3), cx);
  const auto split = hodge_split(v);
  EXPECT_LE(mnorm(v.coeffs - split.exact.coeffs - split.coexact.coeffs), 1e-10 * mnorm(v.coeffs));
  EXPECT_LE(std::abs(split.exact.coeffs.dot(cx->m1 * split.coexact.coeffs)), 1e-10 * v.coeffs.dot(cx->m1 * v.coeffs));
  const Vector d = discrete_codifferential(split.coexact).coeffs;
  EXPECT_LE(std::sqrt(d.dot(cx->m0 * d)), 1e-10 * mnorm(split.coexact.coeffs));

  const FormVector grad(1, cx->d0 * random_vector(cx->dim(0), 4), cx);
  EXPECT_LE(mnorm(hodge_split(grad).coexact.coeffs), 1e-10 * mnorm(grad.coeffs));
}

TEST(Complex, CommutingInterpolation)
{
  const auto cx = build_complex(refine_uniform(builtin_mesh("square"), 3));
  const auto phi = [](Point p) { return std::sin(M_PI * p.x) * std::sin(M_PI * p.y); };
  const auto grad = [](Point p) {
    return Vec2{M_PI * std::cos(M_PI * p.x) * std::sin(M_PI * p.y), M_PI * std::sin(M_PI * p.x) * std::cos(M_PI * p.y)};
  };
  const auto v = interpolate_vertex(cx, phi);
  const auto e = interpolate_edge(cx, grad, 16);
  EXPECT_LT((cx->d0 * v.coeffs - e.coeffs).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Complex, PoincareAgainstDenseOracle)
{
  for (int rounds : {0, 2, 4}) {
    const auto cx = build_complex(refine_uniform(builtin_mesh("square"), rounds));
    const auto pc = discrete_poincare_constants(*cx);
    const SparseMatrix curl = cx->d1.transpose() * cx->m2 * cx->d1;
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(Eigen::MatrixXd(curl), Eigen::MatrixXd(cx->m1));
    // The first dim V0 eigenvalues belong to the gradients.
    const auto& ev = es.eigenvalues();
    EXPECT_LT(ev(cx->dim(0) - 1), 1e-8 * ev(cx->dim(0)));
    EXPECT_NEAR(pc.cp_d, 1.0 / std::sqrt(ev(cx->dim(0))), 1e-8 * pc.cp_d);
    const SparseMatrix lap = cx->d0.transpose() * cx->m1 * cx->d0;
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es0(Eigen::MatrixXd(lap), Eigen::MatrixXd(cx->m0));
    EXPECT_NEAR(pc.cp_delta, 1.0 / std::sqrt(es0.eigenvalues()(0)), 1e-8 * pc.cp_delta);
  }
}

TEST(Complex, PoincareApproachesAnalyticSpectrum)
{
  // Unit square: smallest Maxwell eigenvalue pi^2, smallest Dirichlet
  // Laplace eigenvalue 2 pi^2.
  const auto cx = build_complex(refine_uniform(builtin_mesh("square"), 6));
  const auto pc = discrete_poincare_constants(*cx);
  EXPECT_NEAR(pc.cp_d, 1.0 / M_PI, 0.01 / M_PI);
  EXPECT_NEAR(pc.cp_delta, 1.0 / (M_PI * std::sqrt(2.0)), 0.01 / (M_PI * std::sqrt(2.0)));
}

TEST(Prolongation, ReproducesCoarseFunctions)
{
  const Mesh coarse = refine_uniform(builtin_mesh("lshape"), 1);
  const Mesh fine = coarse.bisect(make_mark_set({0, 3, 7, 8}));
  const auto cc = build_complex(coarse);
  const auto cf = build_complex(fine);
  const auto p = prolongation(*cc, *cf, fine.parent());
  const FormVector s(0, random_vector(cc->dim(0), 1), cc);
  const FormVector u(1, random_vector(cc->dim(1), 2), cc);
  const FormVector sf = prolong(s, p, cf);
  const FormVector uf = prolong(u, p, cf);
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> d(0.0, 1.0);
  for (int t = 0; t < static_cast<int>(fine.n_triangles()); ++t) {
    double a = d(rng), b = d(rng);
    if (a + b > 1) a = 1 - a, b = 1 - b;
    const std::array<double, 3> bary{1 - a - b, a, b};
    const Point x = element_geometry(fine, t).map(bary);
    const int parent = fine.parent()[t];
    const auto pb = element_geometry(coarse, parent).barycentric(x);
    EXPECT_NEAR(eval_p1(sf, t, bary), eval_p1(s, parent, pb), 1e-13);
    const Vec2 wf = eval_whitney(uf, t, bary), wc = eval_whitney(u, parent, pb);
    EXPECT_NEAR(wf[0], wc[0], 1e-12);
    EXPECT_NEAR(wf[1], wc[1], 1e-12);
  }
  // Prolongation commutes with the exterior derivatives.
  EXPECT_LT(Eigen::MatrixXd(cf->d0 * p.p0 - p.p1 * cc->d0).cwiseAbs().maxCoeff(), 1e-13);
  EXPECT_LT(Eigen::MatrixXd(cf->d1 * p.p1 - p.p2 * cc->d1).cwiseAbs().maxCoeff(), 1e-13);
}

TEST(Prolongation, RejectsNonNestedMeshes)
{
  const Mesh coarse = builtin_mesh("square");
  const Mesh fine = refine_uniform(coarse, 2);
  auto verts = fine.vertices();
  for (std::size_t v = coarse.n_vertices(); v < verts.size(); ++v)
    if (!fine.boundary_vertex()[v]) verts[v].x += 0.03;
  const Mesh moved(verts, fine.triangles());
  EXPECT_THROW(prolongation(*build_complex(coarse), *build_complex(moved), fine.parent()), NotNestedError);
  EXPECT_NO_THROW(prolongation(*build_complex(coarse), *build_complex(moved), fine.parent(), false));
}

TEST(Complex, TripletExport)
{
  const auto cx = build_complex(builtin_mesh("square"));
  std::stringstream ss;
  write_triplets(ss, cx->d0);
  int rows = 0;
  std::string line;
  while (std::getline(ss, line))
    if (!line.empty()) ++rows;
  EXPECT_EQ(rows, cx->d0.nonZeros());
}
