#include "amfem/saddle.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace amfem;

namespace {

double mnorm(const SparseMatrix& m, const Vector& x) { return std::sqrt(x.dot(m * x)); }

}  // namespace

TEST(Saddle, MatrixIsBitSymmetric)
{
  const auto cx = build_complex(refine_uniform(builtin_mesh("lshape"), 2));
  for (Variant v : {Variant::hodge, Variant::maxwell}) {
    const auto sys = assemble(cx, find_problem("S1").f, v, 8);
    const SparseMatrix at = sys.matrix.transpose();
    EXPECT_EQ(Eigen::MatrixXd(sys.matrix - at).cwiseAbs().maxCoeff(), 0.0);
    EXPECT_EQ(sys.rhs.head(cx->dim(0)).norm(), 0.0);
  }
}

TEST(Saddle, LoadVectorOfGradientField)
{
  // For f = grad phi the load vector of D0 tau is <grad phi, grad tau>,
  // which equals (D0 tau)^T M1 D0 I(phi) when phi is piecewise linear.
  const Mesh m = refine_uniform(builtin_mesh("square"), 2);
  const auto cx = build_complex(m);
  const SourceFn f = [](Point, Point) { return Vec2{2.0, -1.0}; };
  const Vector b = load_vector(*cx, f, 4);
  // Constant fields are gradients of linear functions; against D0 tau with
  // tau vanishing on the boundary their work is zero.
  EXPECT_LT((cx->d0.transpose() * b).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Saddle, HodgeSolutionSatisfiesTheMixedEquations)
{
  const auto cx = build_complex(refine_uniform(builtin_mesh("square"), 4));
  const auto sys = assemble(cx, find_problem("M1").f, Variant::hodge, 16);
  const auto sol = solve(sys);
  const Vector lhs = cx->m0 * sol.sigma.coeffs;
  const Vector rhs = cx->d0.transpose() * (cx->m1 * sol.u.coeffs);
  EXPECT_LE((lhs - rhs).norm(), 1e-10 * rhs.norm());
  const Vector r2 = cx->m1 * (cx->d0 * sol.sigma.coeffs) +
                    cx->d1.transpose() * (cx->m2 * (cx->d1 * sol.u.coeffs)) - sys.b;
  EXPECT_LE(r2.norm(), 1e-10 * sys.b.norm());
  EXPECT_EQ(sol.method, "sparse-lu");
  EXPECT_NEAR(graph_norm(sol), std::sqrt(mnorm(cx->m1, cx->d0 * sol.sigma.coeffs) * mnorm(cx->m1, cx->d0 * sol.sigma.coeffs) +
                                         mnorm(cx->m2, cx->d1 * sol.u.coeffs) * mnorm(cx->m2, cx->d1 * sol.u.coeffs)),
              1e-12);
}

TEST(Saddle, IterativeMatchesDirect)
{
  const auto cx = build_complex(refine_uniform(builtin_mesh("square"), 3));
  const auto sys = assemble(cx, find_problem("M1").f, Variant::hodge, 16);
  const auto a = solve(sys);
  SolveOptions it;
  it.force_iterative = true;
  it.tol = 1e-10;
  const auto b = solve(sys, it);
  EXPECT_EQ(b.method, "minres");
  EXPECT_LE((a.u.coeffs - b.u.coeffs).norm(), 1e-7 * a.u.coeffs.norm());
}

TEST(Saddle, MaxwellSolutionIsDivergenceFree)
{
  const auto cx = build_complex(refine_uniform(builtin_mesh("square"), 4));
  const auto sys = assemble(cx, find_problem("M2").f, Variant::maxwell, 16);
  const auto sol = solve(sys);
  const Vector g = cx->d0.transpose() * (cx->m1 * sol.u.coeffs);
  EXPECT_LE(g.norm(), 1e-10 * (cx->m1 * sol.u.coeffs).norm());
  EXPECT_LT(sol.compatibility_violation, 1e-10);
}

TEST(Saddle, MaxwellIncompatibleDataIsReportedAndProjected)
{
  const auto cx = build_complex(refine_uniform(builtin_mesh("lshape"), 2));
  const auto sys = assemble(cx, find_problem("S1").f, Variant::maxwell, 8);
  const auto raw = solve(sys);
  EXPECT_GT(raw.compatibility_violation, 0.1);
  EXPECT_FALSE(raw.rhs_projected);
  SolveOptions opts;
  opts.project_rhs = true;
  const auto proj = solve(sys, opts);
  EXPECT_TRUE(proj.rhs_projected);
  EXPECT_LT(proj.sigma.coeffs.norm(), 1e-10 * raw.sigma.coeffs.norm());
  // The divergence-free part of u does not see the gradient part of f.
  EXPECT_LE((proj.u.coeffs - raw.u.coeffs).norm(), 1e-9 * raw.u.coeffs.norm());
}

TEST(Saddle, ZeroDataAndBadTolerance)
{
  const auto cx = build_complex(builtin_mesh("square"));
  const auto sys = assemble(cx, find_problem("Z0").f, Variant::hodge, 4);
  const auto sol = solve(sys);
  EXPECT_EQ(sol.u.coeffs.norm(), 0.0);
  EXPECT_EQ(sol.sigma.coeffs.norm(), 0.0);
  SolveOptions bad;
  bad.tol = 0.1;
  EXPECT_THROW(solve(sys, bad), std::invalid_argument);
}
