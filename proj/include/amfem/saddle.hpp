#pragma once

#include "amfem/feec.hpp"
#include "amfem/problems.hpp"

#include <string>

namespace amfem {

/// Symmetrized mixed system
///
///   [ -M0      D0^T M1      ] [sigma]   [0]
///   [ M1 D0    D1^T M2 D1   ] [  u  ] = [b],   b_i = <f, w_i>,
///
/// obtained by negating the first block row of the mixed formulation. The
/// maxwell variant drops the sigma mass block.
struct SaddleSystem {
  ComplexPtr complex;
  Variant variant = Variant::hodge;
  int quad_degree = 0;
  SparseMatrix matrix;
  Vector rhs;  // (0, b)
  Vector b;
};

/// b_i = integral of f . w_i, element by element with the triangle rule of
/// the given degree; element contributions are reduced in element order.
Vector load_vector(const Complex& cx, const SourceFn& f, int quad_degree, int threads = 1);

SaddleSystem assemble(ComplexPtr cx, const SourceFn& f, Variant variant, int quad_degree, int threads = 1);

struct SolveOptions {
  double tol = 1e-12;
  bool project_rhs = false;      // maxwell: remove the range(M1 D0) part of b
  bool force_iterative = false;  // skip the direct factorization
  int max_iterations = 20000;    // Krylov fallback
};

struct MixedSolution {
  FormVector sigma;
  FormVector u;
  double residual = 0.0;           // ||A x - rhs||
  double relative_residual = 0.0;  // residual / ||rhs||
  /// ||r||_inf / (||A||_inf ||x||_inf + ||rhs||_inf). The solve is accepted
  /// when either this or the relative residual is below the tolerance: on
  /// fine meshes the relative residual of a backward-stable solve stalls
  /// near eps * cond(A), which grows like h^-2.
  double backward_error = 0.0;
  std::string method;              // "sparse-lu" | "minres"
  /// Maxwell only: dual norm sqrt(g^T (D0^T M1 D0)^{-1} g), g = D0^T b, of the
  /// gradient part of the data, before any projection.
  double compatibility_violation = 0.0;
  bool rhs_projected = false;
};

class SolverError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

MixedSolution solve(const SaddleSystem& sys, const SolveOptions& opts = {});

/// (||d sigma||^2 + ||d u||^2)^{1/2}
double graph_norm(const FormVector& sigma, const FormVector& u);
double graph_norm(const MixedSolution& sol);

}  // namespace amfem
