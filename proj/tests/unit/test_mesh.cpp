#include "amfem/mesh.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

using namespace amfem;

namespace {

double angle_at(const Point& a, const Point& b, const Point& c)
{
  const double ux = b.x - a.x, uy = b.y - a.y, vx = c.x - a.x, vy = c.y - a.y;
  return std::acos((ux * vx + uy * vy) / (std::hypot(ux, uy) * std::hypot(vx, vy)));
}

Mesh random_refine(Mesh mesh, int rounds, unsigned seed)
{
  std::mt19937 rng(seed);
  for (int r = 0; r < rounds; ++r) {
    std::vector<int> marks;
    std::bernoulli_distribution pick(0.2);
    for (std::size_t t = 0; t < mesh.n_triangles(); ++t)
      if (pick(rng)) marks.push_back(static_cast<int>(t));
    if (marks.empty()) marks.push_back(0);
    mesh = mesh.bisect(make_mark_set(marks));
  }
  return mesh;
}

bool inside(const Point& p, const Point& a, const Point& b, const Point& c)
{
  auto cross = [](const Point& o, const Point& u, const Point& v) {
    return (u.x - o.x) * (v.y - o.y) - (u.y - o.y) * (v.x - o.x);
  };
  const double d1 = cross(a, b, p), d2 = cross(b, c, p), d3 = cross(c, a, p);
  return (d1 >= -1e-14 && d2 >= -1e-14 && d3 >= -1e-14) || (d1 <= 1e-14 && d2 <= 1e-14 && d3 <= 1e-14);
}

}  // namespace

TEST(Mesh, BuiltinsAreConforming)
{
  for (const auto& name : builtin_mesh_names()) {
    const Mesh m = builtin_mesh(name);
    std::string why;
    EXPECT_TRUE(m.is_conforming(&why)) << name << ": " << why;
    EXPECT_EQ(m.euler_characteristic(), 1) << name;
  }
  EXPECT_NEAR(builtin_mesh("square").total_area(), 1.0, 1e-15);
  EXPECT_NEAR(builtin_mesh("lshape").total_area(), 3.0, 1e-15);
}

TEST(Mesh, RandomBisectionStaysConformingAndKeepsArea)
{
  for (const char* name : {"square", "lshape"}) {
    const Mesh m0 = builtin_mesh(name);
    const Mesh m = random_refine(m0, 12, 7);
    std::string why;
    EXPECT_TRUE(m.is_conforming(&why)) << why;
    EXPECT_NEAR(m.total_area(), m0.total_area(), 1e-13);
  }
}

TEST(Mesh, BisectionOfRightIsoscelesKeepsSimilarityClass)
{
  // Newest vertex bisection of a right isosceles triangle through its
  // hypotenuse produces right isosceles triangles only.
  const Mesh m = random_refine(builtin_mesh("square"), 15, 3);
  for (std::size_t t = 0; t < m.n_triangles(); ++t) {
    const auto& v = m.triangles()[t];
    const auto& p = m.vertices();
    std::array<double, 3> ang{angle_at(p[v[0]], p[v[1]], p[v[2]]), angle_at(p[v[1]], p[v[2]], p[v[0]]),
                              angle_at(p[v[2]], p[v[0]], p[v[1]])};
    std::sort(ang.begin(), ang.end());
    EXPECT_NEAR(ang[0], M_PI / 4, 1e-12);
    EXPECT_NEAR(ang[2], M_PI / 2, 1e-12);
  }
  EXPECT_NEAR(mesh_metrics(m).min_angle, M_PI / 4, 1e-12);
}

TEST(Mesh, ChildrenLieInParents)
{
  const Mesh coarse = random_refine(builtin_mesh("lshape"), 3, 11);
  const Mesh fine = coarse.bisect(make_mark_set({0, 5, 9}));
  ASSERT_EQ(fine.parent().size(), fine.n_triangles());
  std::vector<double> area(coarse.n_triangles(), 0.0);
  for (std::size_t t = 0; t < fine.n_triangles(); ++t) {
    const int p = fine.parent()[t];
    const auto& cv = coarse.triangles()[p];
    const auto& cp = coarse.vertices();
    for (int k = 0; k < 3; ++k)
      EXPECT_TRUE(inside(fine.vertices()[fine.triangles()[t][k]], cp[cv[0]], cp[cv[1]], cp[cv[2]]));
    area[p] += fine.area(static_cast<int>(t));
  }
  for (std::size_t t = 0; t < coarse.n_triangles(); ++t) EXPECT_NEAR(area[t], coarse.area(static_cast<int>(t)), 1e-15);
}

TEST(Mesh, MarkedTrianglesAreRefined)
{
  const Mesh m = builtin_mesh("lshape");
  const Mesh f = m.bisect(make_mark_set({4}));
  int children = 0;
  for (int p : f.parent()) children += p == 4;
  EXPECT_GE(children, 2);
}

TEST(Mesh, UniformRefinementCounts)
{
  const Mesh m = builtin_mesh("square");
  const Mesh r = refine_uniform(m, 2);
  EXPECT_EQ(r.n_triangles(), 4 * m.n_triangles());
  EXPECT_NEAR(mesh_metrics(r).h_max, 0.5 * mesh_metrics(m).h_max, 1e-14);
  for (std::size_t t = 0; t < r.n_triangles(); ++t) EXPECT_LT(r.parent()[t], static_cast<int>(m.n_triangles()));
  const Mesh same = refine_uniform(m, 0);
  EXPECT_EQ(same.n_triangles(), m.n_triangles());
}

TEST(Mesh, EmptyMarkSetIsIdentity)
{
  const Mesh m = builtin_mesh("square");
  const Mesh f = m.bisect(MarkSet{});
  ASSERT_EQ(f.n_triangles(), m.n_triangles());
  for (std::size_t t = 0; t < f.n_triangles(); ++t) EXPECT_EQ(f.parent()[t], static_cast<int>(t));
}

TEST(Mesh, WithoutClosureLeavesHangingNodes)
{
  // Pick a triangle whose neighbour across the refinement edge has a
  // different refinement edge.
  const Mesh m = random_refine(builtin_mesh("square"), 3, 21);
  int pick = -1;
  for (int t = 0; t < static_cast<int>(m.n_triangles()) && pick < 0; ++t) {
    const int e = m.triangle_edges()[t][0];
    if (m.boundary_edge()[e]) continue;
    const auto& nb = m.edge_triangles()[e];
    const int other = nb[0] == t ? nb[1] : nb[0];
    if (m.triangle_edges()[other][0] != e) pick = t;
  }
  ASSERT_GE(pick, 0);
  EXPECT_TRUE(m.bisect(make_mark_set({pick})).is_conforming());
  const Mesh f = m.bisect_without_closure(make_mark_set({pick}));
  EXPECT_FALSE(f.is_conforming());
}

TEST(Mesh, AncestorMapComposes)
{
  const Mesh a = builtin_mesh("square");
  const Mesh b = a.bisect(make_mark_set({1, 2}));
  const Mesh c = b.bisect(make_mark_set({0, 3}));
  const auto map = ancestor_map({&a, &b, &c});
  for (std::size_t t = 0; t < c.n_triangles(); ++t) EXPECT_EQ(map[t], b.parent()[c.parent()[t]]);
}

TEST(Mesh, TextRoundTrip)
{
  const Mesh m = random_refine(builtin_mesh("lshape"), 4, 5);
  std::stringstream ss;
  write_mesh(ss, m);
  const Mesh r = read_mesh(ss);
  ASSERT_EQ(r.n_vertices(), m.n_vertices());
  ASSERT_EQ(r.n_triangles(), m.n_triangles());
  for (std::size_t v = 0; v < m.n_vertices(); ++v) {
    EXPECT_EQ(r.vertices()[v].x, m.vertices()[v].x);
    EXPECT_EQ(r.vertices()[v].y, m.vertices()[v].y);
    EXPECT_EQ(r.boundary_vertex()[v], m.boundary_vertex()[v]);
  }
  EXPECT_NEAR(r.total_area(), 3.0, 1e-14);
}

TEST(Mesh, RejectsBadInput)
{
  std::stringstream garbage("3 1\n0 0 1\n1 0 1\n");
  EXPECT_THROW(read_mesh(garbage), MeshError);
  // Four triangles sharing one edge.
  std::stringstream fan("5 3\n0 0 1\n1 0 1\n0.5 1 1\n0.5 -1 1\n0.5 2 1\n0 1 2\n1 0 3\n0 1 4\n");
  EXPECT_THROW(read_mesh(fan), MeshError);
  std::stringstream flat("3 1\n0 0 1\n1 0 1\n2 0 1\n0 1 2\n");
  EXPECT_THROW(read_mesh(flat), MeshError);
  EXPECT_THROW(builtin_mesh("torus"), MeshError);
}

TEST(Mesh, EdgeSignsCancelAcrossInteriorEdges)
{
  const Mesh m = random_refine(builtin_mesh("square"), 5, 9);
  std::vector<int> sum(m.n_edges(), 0);
  for (std::size_t t = 0; t < m.n_triangles(); ++t)
    for (int k = 0; k < 3; ++k) sum[m.triangle_edges()[t][k]] += m.edge_sign(static_cast<int>(t), k);
  for (std::size_t e = 0; e < m.n_edges(); ++e)
    if (!m.boundary_edge()[e]) EXPECT_EQ(sum[e], 0);
}

TEST(Mesh, SvgMentionsEveryTriangle)
{
  const Mesh m = builtin_mesh("square");
  std::stringstream ss;
  write_svg(ss, m, {0});
  const std::string s = ss.str();
  EXPECT_NE(s.find("<svg"), std::string::npos);
  std::size_t count = 0;
  for (std::size_t pos = 0; (pos = s.find("<polygon", pos)) != std::string::npos; ++pos) ++count;
  EXPECT_EQ(count, m.n_triangles());
}
