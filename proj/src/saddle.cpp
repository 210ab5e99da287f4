#include "amfem/saddle.hpp"

#include "amfem/parallel.hpp"
#include "amfem/quadrature.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>
#include <unsupported/Eigen/IterativeSolvers>

#include <cmath>
#include <sstream>

namespace amfem {

Vector load_vector(const Complex& cx, const SourceFn& f, int quad_degree, int threads)
{
  if (quad_degree < 2) throw std::invalid_argument("quadrature degree must be >= 2");
  const Mesh& mesh = *cx.mesh;
  const auto& rule = triangle_rule(quad_degree);
  const std::size_t nt = mesh.n_triangles();
  std::vector<std::array<double, 3>> local(nt);
  parallel_for(nt, threads, [&](std::size_t i) {
    const int t = static_cast<int>(i);
    const auto g = element_geometry(mesh, t);
    const Point side = mesh.centroid(t);
    std::array<double, 3> acc{};
    for (const auto& q : rule) {
      const Vec2 fv = f(g.map(q.bary), side);
      const auto w = local_whitney(mesh, t, g, q.bary);
      for (int k = 0; k < 3; ++k) acc[k] += q.weight * (fv[0] * w[k][0] + fv[1] * w[k][1]);
    }
    for (auto& a : acc) a *= g.area;
    local[i] = acc;
  });
  Vector b = Vector::Zero(cx.dim(1));
  for (std::size_t t = 0; t < nt; ++t)
    for (int k = 0; k < 3; ++k) {
      const int dof = cx.edge_dof[mesh.triangle_edges()[t][k]];
      if (dof >= 0) b[dof] += local[t][k];
    }
  return b;
}

SaddleSystem assemble(ComplexPtr cx, const SourceFn& f, Variant variant, int quad_degree, int threads)
{
  SaddleSystem sys;
  sys.variant = variant;
  sys.quad_degree = quad_degree;
  sys.b = load_vector(*cx, f, quad_degree, threads);
  const int n0 = cx->dim(0);
  const int n1 = cx->dim(1);

  const SparseMatrix m1d0 = cx->m1 * cx->d0;
  const SparseMatrix curl = cx->d1.transpose() * cx->m2 * cx->d1;
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(cx->m0.nonZeros() + 2 * m1d0.nonZeros() + curl.nonZeros());
  if (variant == Variant::hodge) {
    for (int c = 0; c < cx->m0.outerSize(); ++c)
      for (SparseMatrix::InnerIterator it(cx->m0, c); it; ++it) trip.emplace_back(it.row(), it.col(), -it.value());
  }
  // Both off-diagonal blocks are written from the same entries, so the
  // assembled matrix is symmetric bit for bit.
  for (int c = 0; c < m1d0.outerSize(); ++c)
    for (SparseMatrix::InnerIterator it(m1d0, c); it; ++it) {
      trip.emplace_back(n0 + it.row(), it.col(), it.value());
      trip.emplace_back(it.col(), n0 + it.row(), it.value());
    }
  // D1^T M2 D1 as a product is not guaranteed to be bitwise symmetric;
  // mirror its upper triangle.
  for (int c = 0; c < curl.outerSize(); ++c)
    for (SparseMatrix::InnerIterator it(curl, c); it; ++it) {
      if (it.row() > it.col()) continue;
      trip.emplace_back(n0 + it.row(), n0 + it.col(), it.value());
      if (it.row() != it.col()) trip.emplace_back(n0 + it.col(), n0 + it.row(), it.value());
    }
  sys.matrix.resize(n0 + n1, n0 + n1);
  sys.matrix.setFromTriplets(trip.begin(), trip.end());
  sys.rhs = Vector::Zero(n0 + n1);
  sys.rhs.tail(n1) = sys.b;
  sys.complex = std::move(cx);
  return sys;
}

MixedSolution solve(const SaddleSystem& sys, const SolveOptions& opts)
{
  if (!(opts.tol > 0.0 && opts.tol <= 1e-6)) throw std::invalid_argument("solver tolerance must lie in (0, 1e-6]");
  const Complex& cx = *sys.complex;
  const int n0 = cx.dim(0);
  const int n1 = cx.dim(1);
  MixedSolution out;
  Vector rhs = sys.rhs;

  if (sys.variant == Variant::maxwell) {
    const SparseMatrix lap = cx.d0.transpose() * cx.m1 * cx.d0;
    Eigen::SimplicialLDLT<SparseMatrix> lap_solver(lap);
    if (lap_solver.info() != Eigen::Success) throw SolverError("maxwell: D0^T M1 D0 factorization failed");
    const Vector g = cx.d0.transpose() * sys.b;
    const Vector p = lap_solver.solve(g);
    out.compatibility_violation = std::sqrt(std::max(0.0, g.dot(p)));
    if (opts.project_rhs) {
      rhs.tail(n1) = sys.b - cx.m1 * (cx.d0 * p);
      out.rhs_projected = true;
    }
  }

  const double rhs_norm = rhs.norm();
  double a_inf = 0.0;
  {
    Vector row = Vector::Zero(n0 + n1);
    for (int c = 0; c < sys.matrix.outerSize(); ++c)
      for (SparseMatrix::InnerIterator it(sys.matrix, c); it; ++it) row[it.row()] += std::abs(it.value());
    a_inf = row.maxCoeff();
  }
  auto accepted = [&](const Vector& x, double* rel, double* bwd) {
    const Vector r = rhs - sys.matrix * x;
    const double rn = r.norm();
    *rel = rhs_norm > 0.0 ? rn / rhs_norm : rn;
    const double den = a_inf * x.lpNorm<Eigen::Infinity>() + rhs.lpNorm<Eigen::Infinity>();
    *bwd = den > 0.0 ? r.lpNorm<Eigen::Infinity>() / den : 0.0;
    return std::isfinite(rn) && (*rel <= opts.tol || *bwd <= opts.tol);
  };
  Vector x = Vector::Zero(n0 + n1);
  if (rhs_norm == 0.0) {
    out.method = "trivial";
  } else {
    bool ok = false;
    if (!opts.force_iterative) {
      Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>> lu;
      lu.analyzePattern(sys.matrix);
      lu.factorize(sys.matrix);
      if (lu.info() == Eigen::Success) {
        x = lu.solve(rhs);
        for (int step = 0; step < 3; ++step) {
          const Vector r = rhs - sys.matrix * x;
          if (r.norm() <= 1e-3 * opts.tol * rhs_norm) break;
          x += lu.solve(r);
        }
        double rel = 0.0, bwd = 0.0;
        ok = accepted(x, &rel, &bwd);
        out.method = "sparse-lu";
      }
    }
    if (!ok) {
      Eigen::MINRES<SparseMatrix, Eigen::Lower | Eigen::Upper, Eigen::IdentityPreconditioner> minres;
      minres.setTolerance(opts.tol);
      minres.setMaxIterations(opts.max_iterations);
      minres.compute(sys.matrix);
      x = minres.solveWithGuess(rhs, std::isfinite(x.norm()) ? x : Vector(Vector::Zero(n0 + n1)));
      out.method = "minres";
    }
  }
  out.residual = (rhs - sys.matrix * x).norm();
  if (!accepted(x, &out.relative_residual, &out.backward_error)) {
    std::ostringstream msg;
    msg << "saddle-point solve did not reach the tolerance (relative residual " << out.relative_residual
        << ", backward error " << out.backward_error << ")";
    throw SolverError(msg.str());
  }
  out.sigma = FormVector(0, x.head(n0), sys.complex);
  out.u = FormVector(1, x.tail(n1), sys.complex);
  return out;
}

double graph_norm(const FormVector& sigma, const FormVector& u)
{
  if (sigma.degree != 0 || u.degree != 1) throw std::invalid_argument("graph_norm expects a 0-form and a 1-form");
  const Complex& cx = *sigma.complex;
  const Vector ds = cx.d0 * sigma.coeffs;
  const Vector du = cx.d1 * u.coeffs;
  return std::sqrt(std::max(0.0, ds.dot(cx.m1 * ds) + du.dot(cx.m2 * du)));
}

double graph_norm(const MixedSolution& sol) { return graph_norm(sol.sigma, sol.u); }

}  // namespace amfem
