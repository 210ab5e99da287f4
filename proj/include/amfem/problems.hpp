#pragma once

#include "amfem/feec.hpp"
#include "amfem/mesh.hpp"

#include <filesystem>
#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace amfem {

enum class Variant { hodge, maxwell };

std::string to_string(Variant v);
/// Accepts "hodge" and "maxwell"; throws std::invalid_argument otherwise.
Variant parse_variant(const std::string& s);

/// Exact fields at one point: sigma = -div u, f = grad sigma + rot*(rot u)
/// with rot u = d_x u_y - d_y u_x and rot* w = (d_y w, -d_x w).
struct FieldSample {
  double sigma = 0.0;
  Vec2 grad_sigma{};
  Vec2 u{};
  double rot_u = 0.0;
  Vec2 f{};
  double div_f = 0.0;
};

namespace detail {
FieldSample smooth_hodge_fields(double x, double y);
FieldSample smooth_maxwell_fields(double x, double y);
/// Not defined at the reentrant corner (0, 0).
FieldSample singular_lshape_fields(double x, double y);
}  // namespace detail

/// Source fields are evaluated as f(x, side): `side` is any point strictly
/// inside the element the evaluation belongs to. Smooth sources ignore it;
/// piecewise sources use it to pick the branch, so edge traces from the two
/// neighbouring elements can differ.
using SourceFn = std::function<Vec2(Point x, Point side)>;
using ScalarSourceFn = std::function<double(Point x, Point side)>;

struct Problem {
  std::string name;
  std::string description;
  std::string domain;        // "unit_square" | "l_shape" | "custom"
  std::string default_mesh;  // builtin mesh tag
  Variant variant = Variant::hodge;
  std::string regularity = "unknown";  // "smooth" | "singular" | "unknown"
  SourceFn f;
  ScalarSourceFn div_f;
  /// Empty when no closed-form solution is known.
  std::function<FieldSample(Point)> exact;

  [[nodiscard]] bool has_exact() const { return static_cast<bool>(exact); }
};

/// M1, M2, S1, S2 and Z0 (zero source).
std::vector<Problem> problem_catalog();
/// Throws std::invalid_argument for unknown names.
Problem find_problem(const std::string& name);

/// Custom source from a CSV table "x,y,fx,fy" (header optional). The samples
/// are fitted per triangle of `mesh` by least squares with polynomials of
/// degree 0 or 1; each triangle uses the samples inside it, or the nearest
/// samples to its centroid when it contains too few. The fitted field is
/// piecewise polynomial on `mesh`; refined meshes must be nested in it.
Problem load_source_table(const std::filesystem::path& path, const Mesh& mesh, int degree,
                          Variant variant = Variant::hodge);

struct ErrorParts {
  double energy = 0.0;
  double sigma_part = 0.0;  // ||grad(sigma - sigma_h)||
  double u_part = 0.0;      // ||rot(u - u_h)||
};

/// Energy error against the exact solution by quadrature of the given degree.
/// Throws std::invalid_argument when the problem has no exact solution.
ErrorParts eval_error(const Problem& problem, const FormVector& sigma, const FormVector& u, int quad_degree);

}  // namespace amfem
