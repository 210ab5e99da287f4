#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace amfem {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

using Vec2 = std::array<double, 2>;

/// Thrown for malformed mesh input: parse failures, non-conforming or
/// degenerate triangulations, domains with holes.
class MeshError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

enum class MarkProvenance { sigma, total, combined, uniform, user };

std::string to_string(MarkProvenance p);

/// A set of triangle indices into one specific mesh. Sorted, no duplicates.
struct MarkSet {
  std::vector<int> elements;
  MarkProvenance provenance = MarkProvenance::user;

  [[nodiscard]] std::size_t size() const { return elements.size(); }
  [[nodiscard]] bool empty() const { return elements.empty(); }
  [[nodiscard]] bool contains(int t) const;
};

/// Builds a MarkSet from arbitrary indices (sorted and de-duplicated).
MarkSet make_mark_set(std::vector<int> elements, MarkProvenance provenance = MarkProvenance::user);

struct MeshMetrics {
  double h_max = 0.0;     // max |K|^{1/2}
  double min_angle = 0.0; // radians
  std::size_t n_vertices = 0;
  std::size_t n_edges = 0;
  std::size_t n_elements = 0;
  std::size_t n_interior_edges = 0;
  std::size_t n_interior_vertices = 0;
};

/// Conforming triangulation of a polygonal domain, prepared for newest vertex
/// bisection.
///
/// Each triangle is stored counter-clockwise as (newest, a, b): the
/// refinement edge is (a, b), opposite the newest vertex. Edges are numbered
/// by the sorted pair (low, high) of their vertex indices and are oriented
/// low -> high. Local edge i of a triangle is the edge opposite local vertex i,
/// so local edge 0 is the refinement edge.
///
/// A Mesh is immutable; bisect() returns a new Mesh together with the
/// child -> parent map.
class Mesh {
public:
  /// Validates the input and assigns the initial refinement edges (longest
  /// edge, ties broken by the lowest global edge index).
  Mesh(std::vector<Point> vertices, std::vector<std::array<int, 3>> triangles);

  [[nodiscard]] const std::vector<Point>& vertices() const { return vertices_; }
  [[nodiscard]] const std::vector<std::array<int, 3>>& triangles() const { return triangles_; }
  [[nodiscard]] const std::vector<std::array<int, 2>>& edges() const { return edges_; }
  /// Global edge ids of each triangle; entry i is the edge opposite local vertex i.
  [[nodiscard]] const std::vector<std::array<int, 3>>& triangle_edges() const { return tri_edges_; }
  /// The one or two triangles adjacent to each edge; second entry -1 on the boundary.
  [[nodiscard]] const std::vector<std::array<int, 2>>& edge_triangles() const { return edge_tris_; }
  [[nodiscard]] const std::vector<bool>& boundary_vertex() const { return boundary_vertex_; }
  [[nodiscard]] const std::vector<bool>& boundary_edge() const { return boundary_edge_; }
  /// Index of the parent triangle in the mesh this one was bisected from; -1 for an initial mesh.
  [[nodiscard]] const std::vector<int>& parent() const { return parent_; }
  [[nodiscard]] const std::vector<int>& generation() const { return generation_; }

  [[nodiscard]] std::size_t n_vertices() const { return vertices_.size(); }
  [[nodiscard]] std::size_t n_edges() const { return edges_.size(); }
  [[nodiscard]] std::size_t n_triangles() const { return triangles_.size(); }

  [[nodiscard]] double area(int t) const;
  [[nodiscard]] double signed_area(int t) const;
  /// h_K = |K|^{1/2}
  [[nodiscard]] double h(int t) const;
  [[nodiscard]] double edge_length(int e) const;
  [[nodiscard]] Point centroid(int t) const;
  [[nodiscard]] double total_area() const;
  [[nodiscard]] long euler_characteristic() const;

  /// Sign (+1/-1) relating the global orientation of local edge i of triangle t
  /// to the counter-clockwise traversal of its boundary.
  [[nodiscard]] int edge_sign(int t, int local_edge) const;

  /// Conformity predicate: every edge shared by at most two triangles lying
  /// on opposite sides of it, positive areas, and Euler characteristic 1.
  [[nodiscard]] bool is_conforming(std::string* why = nullptr) const;

  /// Newest vertex bisection of every marked triangle, with closure.
  [[nodiscard]] Mesh bisect(const MarkSet& marked) const;

  /// Like bisect() but skips the conforming closure. Produces hanging nodes;
  /// exists for fault-injection controls only.
  [[nodiscard]] Mesh bisect_without_closure(const MarkSet& marked) const;

private:
  friend Mesh refine_uniform(const Mesh& mesh, int rounds);
  struct Labeled {};
  Mesh(Labeled, std::vector<Point> vertices, std::vector<std::array<int, 3>> triangles,
       std::vector<int> parent, std::vector<int> generation, bool validate);

  void build_topology(bool strict);
  void assign_longest_edge_labels();
  Mesh bisect_impl(const MarkSet& marked, bool closure) const;

  std::vector<Point> vertices_;
  std::vector<std::array<int, 3>> triangles_;
  std::vector<std::array<int, 2>> edges_;
  std::vector<std::array<int, 3>> tri_edges_;
  std::vector<std::array<int, 2>> edge_tris_;
  std::vector<bool> boundary_vertex_;
  std::vector<bool> boundary_edge_;
  std::vector<int> parent_;
  std::vector<int> generation_;
};

MeshMetrics mesh_metrics(const Mesh& mesh);

/// Bisects every triangle `rounds` times (each round marks all elements).
/// The parent map of the result points into `mesh`.
Mesh refine_uniform(const Mesh& mesh, int rounds);

/// Maps each triangle of `fine` to its ancestor in the mesh `levels` bisect()
/// calls earlier, given the meshes of the refinement chain coarse-to-fine
/// (chain.front() is the coarse mesh, chain.back() the fine one).
std::vector<int> ancestor_map(const std::vector<const Mesh*>& chain);

/// Text format: line 1 "NV NT"; NV lines "x y boundary_flag"; NT lines "v0 v1 v2".
Mesh read_mesh(std::istream& in);
Mesh load_mesh(const std::filesystem::path& path);
void write_mesh(std::ostream& out, const Mesh& mesh);
void save_mesh(const std::filesystem::path& path, const Mesh& mesh);
void write_svg(std::ostream& out, const Mesh& mesh, const std::vector<int>& highlight = {});

/// Builtin meshes: "square" (2x2 grid, diagonals to the centre, 8 triangles),
/// "square2" (2 triangles), "lshape" (three unit squares, 4 triangles each),
/// "lshape6" (three unit squares, 2 triangles each).
Mesh builtin_mesh(const std::string& tag);
std::vector<std::string> builtin_mesh_names();

}  // namespace amfem
