#pragma once

#include "amfem/mesh.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <functional>
#include <iosfwd>
#include <memory>
#include <stdexcept>

namespace amfem {

using SparseMatrix = Eigen::SparseMatrix<double>;
using Vector = Eigen::VectorXd;

class EmptySpaceError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Lowest-order discrete de Rham complex with homogeneous boundary conditions
/// on a triangulation:
///
///   V0 (P1 Lagrange, interior vertices) --grad--> V1 (Whitney edge forms,
///   interior edges) --rot--> V2 (piecewise constants, one per triangle).
///
/// V2 coefficients are cochains: the integral of the 2-form over each
/// triangle. The exterior derivatives D0, D1 are signed incidence matrices
/// with entries in {-1, 0, +1}; the mass matrices are exact.
struct Complex {
  std::shared_ptr<const Mesh> mesh;
  std::vector<int> vertex_dof;  // -1 on the boundary
  std::vector<int> edge_dof;    // -1 on the boundary
  std::vector<int> dof_vertex;
  std::vector<int> dof_edge;
  SparseMatrix d0;  // dim V1 x dim V0
  SparseMatrix d1;  // dim V2 x dim V1
  SparseMatrix m0;
  SparseMatrix m1;
  SparseMatrix m2;

  [[nodiscard]] int dim(int degree) const;
};

using ComplexPtr = std::shared_ptr<const Complex>;

/// Coefficients of a discrete k-form on a specific complex.
struct FormVector {
  int degree = 0;
  Vector coeffs;
  ComplexPtr complex;

  FormVector() = default;
  FormVector(int k, Vector c, ComplexPtr cx);
  static FormVector zero(int k, ComplexPtr cx);
};

/// Throws EmptySpaceError when the mesh has no interior vertex.
ComplexPtr build_complex(std::shared_ptr<const Mesh> mesh);
ComplexPtr build_complex(const Mesh& mesh);

FormVector apply_d(const FormVector& x);

/// delta_h u = M0^{-1} D0^T M1 u.
FormVector discrete_codifferential(const FormVector& u);

struct HodgeSplit {
  FormVector exact;     // z = D0 phi in Z_{0,h}
  FormVector coexact;   // w in K_h, the M1-orthogonal complement
  FormVector potential; // phi
};

/// v = z + w with z = D0 phi, D0^T M1 D0 phi = D0^T M1 v.
HodgeSplit hodge_split(const FormVector& v);

struct PoincareConstants {
  double cp_d = 0.0;      // ||w|| <= cp_d ||d w||, w in K_h
  double cp_delta = 0.0;  // ||v|| <= cp_delta ||delta_h v||, v in Z_{0,h}
  double lambda_d = 0.0;  // smallest eigenvalue of D1^T M2 D1 on K_h against M1
  double lambda_delta = 0.0;
  int iterations = 0;
};

/// Smallest eigenvalues by block inverse subspace iteration with Rayleigh-Ritz.
/// For d, the pencil (D1^T M2 D1, M1) is deflated onto K_h by Hodge projection
/// of every iterate; for delta_h, the pencil (D0^T M1 D0, M0) on V0 carries
/// the same spectrum as ||delta_h v||^2 / ||v||^2 on Z_{0,h} = D0 V0.
PoincareConstants discrete_poincare_constants(const Complex& cx, double rel_tol = 1e-12,
                                              unsigned seed = 12345);

// ---------------------------------------------------------------------------
// Element-level evaluation

struct ElementGeometry {
  std::array<Point, 3> p;
  std::array<Vec2, 3> grad_lambda;
  double area = 0.0;

  [[nodiscard]] Point map(const std::array<double, 3>& bary) const;
  [[nodiscard]] std::array<double, 3> barycentric(const Point& x) const;
};

ElementGeometry element_geometry(const Mesh& mesh, int t);

/// Value of a P1 form (degree 0) at a point of triangle t.
double eval_p1(const FormVector& sigma, int t, const std::array<double, 3>& bary);
Vec2 grad_p1(const FormVector& sigma, int t);
/// Value of a Whitney 1-form at a point of triangle t (barycentric coordinates
/// of the point relative to t; may lie outside t).
Vec2 eval_whitney(const FormVector& u, int t, const std::array<double, 3>& bary);
/// Scalar rot of a Whitney 1-form on triangle t (constant).
double rot_whitney(const FormVector& u, int t);
/// Whitney basis function of global edge e evaluated on triangle t.
Vec2 whitney_basis(const Mesh& mesh, int e, int t, const std::array<double, 3>& bary);
/// The three Whitney basis functions of triangle t (entry i belongs to local
/// edge i, global orientation).
std::array<Vec2, 3> local_whitney(const Mesh& mesh, int t, const ElementGeometry& g,
                                  const std::array<double, 3>& bary);

// ---------------------------------------------------------------------------
// Canonical interpolation

FormVector interpolate_vertex(ComplexPtr cx, const std::function<double(Point)>& phi);
/// Edge moments: integral of g . t over each interior edge (t = unit tangent low -> high).
FormVector interpolate_edge(ComplexPtr cx, const std::function<Vec2(Point)>& g, int quad_degree = 8);

// ---------------------------------------------------------------------------
// Prolongation between nested complexes

class NotNestedError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct Prolongation {
  SparseMatrix p0;  // fine V0 <- coarse V0
  SparseMatrix p1;  // fine V1 <- coarse V1
  SparseMatrix p2;  // fine V2 cochains <- coarse V2 cochains
};

/// Prolongation matrices reproducing coarse piecewise polynomials exactly on
/// the fine mesh. `fine_to_coarse` maps fine triangles to their ancestors.
/// With require_nested, every fine triangle must lie inside its ancestor.
Prolongation prolongation(const Complex& coarse, const Complex& fine, const std::vector<int>& fine_to_coarse,
                          bool require_nested = true);

FormVector prolong(const FormVector& x, const Prolongation& p, ComplexPtr fine);

/// Writes "row col value" triplets.
void write_triplets(std::ostream& out, const SparseMatrix& a);

}  // namespace amfem
