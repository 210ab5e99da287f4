#pragma once

#include <array>
#include <vector>

namespace amfem {

/// Quadrature point on a triangle in barycentric coordinates; the weights of
/// a rule sum to 1, so integrals are |K| * sum(w_q * g(x_q)).
struct TrianglePoint {
  std::array<double, 3> bary;
  double weight;
};

/// Quadrature point on [0, 1]; weights sum to 1.
struct LinePoint {
  double t;
  double weight;
};

/// Collapsed (Duffy) Gauss-Legendre rule exact for polynomials of total
/// degree <= `degree` on a triangle. Rules are cached.
const std::vector<TrianglePoint>& triangle_rule(int degree);

/// Gauss-Legendre rule on [0, 1] exact for polynomials of degree <= `degree`.
const std::vector<LinePoint>& line_rule(int degree);

}  // namespace amfem
