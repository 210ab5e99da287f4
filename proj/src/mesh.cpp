#include "amfem/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <sstream>

namespace amfem {

namespace {

double orient(const Point& a, const Point& b, const Point& c)
{
  return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
}

double dist2(const Point& a, const Point& b)
{
  const double dx = b.x - a.x;
  const double dy = b.y - a.y;
  return dx * dx + dy * dy;
}

Point midpoint(const Point& a, const Point& b) { return {0.5 * (a.x + b.x), 0.5 * (a.y + b.y)}; }

}  // namespace

std::string to_string(MarkProvenance p)
{
  switch (p) {
    case MarkProvenance::sigma: return "sigma-marking";
    case MarkProvenance::total: return "total-marking";
    case MarkProvenance::combined: return "union";
    case MarkProvenance::uniform: return "uniform";
    case MarkProvenance::user: return "user";
  }
  return "user";
}

bool MarkSet::contains(int t) const
{
  return std::binary_search(elements.begin(), elements.end(), t);
}

MarkSet make_mark_set(std::vector<int> elements, MarkProvenance provenance)
{
  std::sort(elements.begin(), elements.end());
  elements.erase(std::unique(elements.begin(), elements.end()), elements.end());
  return MarkSet{std::move(elements), provenance};
}

Mesh::Mesh(std::vector<Point> vertices, std::vector<std::array<int, 3>> triangles)
    : vertices_(std::move(vertices)), triangles_(std::move(triangles))
{
  if (triangles_.empty()) throw MeshError("mesh has no triangles");
  const int nv = static_cast<int>(vertices_.size());
  for (std::size_t t = 0; t < triangles_.size(); ++t) {
    const auto& tri = triangles_[t];
    for (int v : tri) {
      if (v < 0 || v >= nv) {
        throw MeshError("triangle " + std::to_string(t) + " references vertex " + std::to_string(v) +
                        " out of range");
      }
    }
    if (tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2]) {
      throw MeshError("triangle " + std::to_string(t) + " has repeated vertices");
    }
    if (!(signed_area(static_cast<int>(t)) > 0.0)) {
      throw MeshError("triangle " + std::to_string(t) + " has zero or negative area");
    }
  }
  parent_.assign(triangles_.size(), -1);
  generation_.assign(triangles_.size(), 0);
  build_topology(true);
  assign_longest_edge_labels();
  build_topology(false);
}

Mesh::Mesh(Labeled, std::vector<Point> vertices, std::vector<std::array<int, 3>> triangles,
           std::vector<int> parent, std::vector<int> generation, bool validate)
    : vertices_(std::move(vertices)),
      triangles_(std::move(triangles)),
      parent_(std::move(parent)),
      generation_(std::move(generation))
{
  build_topology(validate);
}

void Mesh::build_topology(bool strict)
{
  struct Entry {
    int lo, hi, tri, local;
  };
  const std::size_t nt = triangles_.size();
  std::vector<Entry> entries;
  entries.reserve(3 * nt);
  for (std::size_t t = 0; t < nt; ++t) {
    const auto& v = triangles_[t];
    for (int i = 0; i < 3; ++i) {
      const int a = v[(i + 1) % 3];
      const int b = v[(i + 2) % 3];
      entries.push_back({std::min(a, b), std::max(a, b), static_cast<int>(t), i});
    }
  }
  std::sort(entries.begin(), entries.end(), [](const Entry& p, const Entry& q) {
    if (p.lo != q.lo) return p.lo < q.lo;
    if (p.hi != q.hi) return p.hi < q.hi;
    return p.tri < q.tri;
  });

  edges_.clear();
  edge_tris_.clear();
  tri_edges_.assign(nt, {-1, -1, -1});
  for (std::size_t k = 0; k < entries.size();) {
    std::size_t j = k;
    while (j < entries.size() && entries[j].lo == entries[k].lo && entries[j].hi == entries[k].hi) ++j;
    const std::size_t count = j - k;
    const int e = static_cast<int>(edges_.size());
    if (count > 2) {
      throw MeshError("non-conforming input: edge (" + std::to_string(entries[k].lo) + ", " +
                      std::to_string(entries[k].hi) + ") shared by more than two triangles");
    }
    edges_.push_back({entries[k].lo, entries[k].hi});
    std::array<int, 2> adj{entries[k].tri, -1};
    if (count == 2) {
      adj[1] = entries[k + 1].tri;
      const Point& a = vertices_[entries[k].lo];
      const Point& b = vertices_[entries[k].hi];
      const Point& c0 = vertices_[triangles_[entries[k].tri][entries[k].local]];
      const Point& c1 = vertices_[triangles_[entries[k + 1].tri][entries[k + 1].local]];
      if (!(orient(a, b, c0) * orient(a, b, c1) < 0.0)) {
        throw MeshError("non-conforming input: triangles " + std::to_string(adj[0]) + " and " +
                        std::to_string(adj[1]) + " overlap across a shared edge");
      }
    }
    edge_tris_.push_back(adj);
    for (std::size_t q = k; q < j; ++q) tri_edges_[entries[q].tri][entries[q].local] = e;
    k = j;
  }

  boundary_edge_.assign(edges_.size(), false);
  boundary_vertex_.assign(vertices_.size(), false);
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    if (edge_tris_[e][1] < 0) {
      boundary_edge_[e] = true;
      boundary_vertex_[edges_[e][0]] = true;
      boundary_vertex_[edges_[e][1]] = true;
    }
  }

  if (strict) {
    std::vector<bool> used(vertices_.size(), false);
    for (const auto& tri : triangles_)
      for (int v : tri) used[v] = true;
    if (std::find(used.begin(), used.end(), false) != used.end()) {
      throw MeshError("non-conforming input: unreferenced vertex");
    }
    if (euler_characteristic() != 1) {
      throw MeshError("domain is not simply connected or mesh has hanging nodes (Euler characteristic " +
                      std::to_string(euler_characteristic()) + ")");
    }
  }
}

void Mesh::assign_longest_edge_labels()
{
  for (std::size_t t = 0; t < triangles_.size(); ++t) {
    auto& v = triangles_[t];
    int best = 0;
    double best_len = -1.0;
    int best_edge = -1;
    for (int i = 0; i < 3; ++i) {
      const double len = dist2(vertices_[v[(i + 1) % 3]], vertices_[v[(i + 2) % 3]]);
      const int e = tri_edges_[t][i];
      if (len > best_len || (len == best_len && e < best_edge)) {
        best = i;
        best_len = len;
        best_edge = e;
      }
    }
    v = {v[best], v[(best + 1) % 3], v[(best + 2) % 3]};
  }
}

double Mesh::signed_area(int t) const
{
  const auto& v = triangles_[t];
  return 0.5 * orient(vertices_[v[0]], vertices_[v[1]], vertices_[v[2]]);
}

double Mesh::area(int t) const { return std::abs(signed_area(t)); }

double Mesh::h(int t) const { return std::sqrt(area(t)); }

double Mesh::edge_length(int e) const
{
  return std::sqrt(dist2(vertices_[edges_[e][0]], vertices_[edges_[e][1]]));
}

Point Mesh::centroid(int t) const
{
  const auto& v = triangles_[t];
  return {(vertices_[v[0]].x + vertices_[v[1]].x + vertices_[v[2]].x) / 3.0,
          (vertices_[v[0]].y + vertices_[v[1]].y + vertices_[v[2]].y) / 3.0};
}

double Mesh::total_area() const
{
  double sum = 0.0;
  for (std::size_t t = 0; t < triangles_.size(); ++t) sum += area(static_cast<int>(t));
  return sum;
}

long Mesh::euler_characteristic() const
{
  return static_cast<long>(vertices_.size()) - static_cast<long>(edges_.size()) +
         static_cast<long>(triangles_.size());
}

int Mesh::edge_sign(int t, int local_edge) const
{
  const auto& v = triangles_[t];
  return v[(local_edge + 1) % 3] < v[(local_edge + 2) % 3] ? 1 : -1;
}

bool Mesh::is_conforming(std::string* why) const
{
  try {
    Mesh copy(Labeled{}, vertices_, triangles_, parent_, generation_, true);
    for (std::size_t t = 0; t < triangles_.size(); ++t) {
      if (!(signed_area(static_cast<int>(t)) > 0.0)) throw MeshError("non-positive area");
    }
  } catch (const MeshError& err) {
    if (why) *why = err.what();
    return false;
  }
  return true;
}

Mesh Mesh::bisect(const MarkSet& marked) const { return bisect_impl(marked, true); }

Mesh Mesh::bisect_without_closure(const MarkSet& marked) const { return bisect_impl(marked, false); }

Mesh Mesh::bisect_impl(const MarkSet& marked, bool closure) const
{
  const int nt = static_cast<int>(triangles_.size());
  for (int t : marked.elements) {
    if (t < 0 || t >= nt) throw std::out_of_range("marked element index out of range");
  }
  if (marked.empty()) {
    std::vector<int> parent(nt);
    std::iota(parent.begin(), parent.end(), 0);
    return Mesh(Labeled{}, vertices_, triangles_, std::move(parent), generation_, false);
  }

  std::vector<char> cut(edges_.size(), 0);
  std::vector<int> stack;
  auto cut_edge = [&](int e) {
    if (cut[e]) return;
    cut[e] = 1;
    for (int t : edge_tris_[e])
      if (t >= 0) stack.push_back(t);
  };
  for (int t : marked.elements) cut_edge(tri_edges_[t][0]);
  if (closure) {
    // An element with any cut edge must have its refinement edge cut.
    while (!stack.empty()) {
      const int t = stack.back();
      stack.pop_back();
      const auto& te = tri_edges_[t];
      if (!cut[te[0]] && (cut[te[1]] || cut[te[2]])) cut_edge(te[0]);
    }
  }

  std::vector<Point> verts = vertices_;
  std::vector<int> mid(edges_.size(), -1);
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    if (!cut[e]) continue;
    mid[e] = static_cast<int>(verts.size());
    verts.push_back(midpoint(vertices_[edges_[e][0]], vertices_[edges_[e][1]]));
  }

  std::vector<std::array<int, 3>> tris;
  std::vector<int> parent;
  std::vector<int> gen;
  tris.reserve(2 * triangles_.size());
  auto emit = [&](std::array<int, 3> tri, int p, int g) {
    tris.push_back(tri);
    parent.push_back(p);
    gen.push_back(g);
  };
  for (int t = 0; t < nt; ++t) {
    const auto& v = triangles_[t];
    const auto& te = tri_edges_[t];
    const int g = generation_[t];
    if (!cut[te[0]]) {
      emit(v, t, g);
      continue;
    }
    // (p1, p2, p3) -> (m, p1, p2) and (m, p3, p1); the children's refinement
    // edges are the parent's edges 2 and 1.
    const int m = mid[te[0]];
    if (cut[te[2]]) {
      const int m2 = mid[te[2]];
      emit({m2, m, v[0]}, t, g + 2);
      emit({m2, v[1], m}, t, g + 2);
    } else {
      emit({m, v[0], v[1]}, t, g + 1);
    }
    if (cut[te[1]]) {
      const int m1 = mid[te[1]];
      emit({m1, m, v[2]}, t, g + 2);
      emit({m1, v[0], m}, t, g + 2);
    } else {
      emit({m, v[2], v[0]}, t, g + 1);
    }
  }
  return Mesh(Labeled{}, std::move(verts), std::move(tris), std::move(parent), std::move(gen), false);
}

MeshMetrics mesh_metrics(const Mesh& mesh)
{
  MeshMetrics m;
  m.n_vertices = mesh.n_vertices();
  m.n_edges = mesh.n_edges();
  m.n_elements = mesh.n_triangles();
  m.min_angle = M_PI;
  const auto& P = mesh.vertices();
  for (std::size_t t = 0; t < mesh.n_triangles(); ++t) {
    m.h_max = std::max(m.h_max, mesh.h(static_cast<int>(t)));
    const auto& v = mesh.triangles()[t];
    for (int i = 0; i < 3; ++i) {
      const Point& a = P[v[i]];
      const Point& b = P[v[(i + 1) % 3]];
      const Point& c = P[v[(i + 2) % 3]];
      const double ux = b.x - a.x, uy = b.y - a.y, wx = c.x - a.x, wy = c.y - a.y;
      const double ang = std::atan2(std::abs(ux * wy - uy * wx), ux * wx + uy * wy);
      m.min_angle = std::min(m.min_angle, ang);
    }
  }
  for (bool b : mesh.boundary_edge())
    if (!b) ++m.n_interior_edges;
  for (bool b : mesh.boundary_vertex())
    if (!b) ++m.n_interior_vertices;
  return m;
}

Mesh refine_uniform(const Mesh& mesh, int rounds)
{
  if (rounds < 0) throw std::invalid_argument("refine_uniform: negative round count");
  Mesh current = mesh.bisect(MarkSet{});
  std::vector<int> to_input = current.parent();
  for (int r = 0; r < rounds; ++r) {
    std::vector<int> all(current.n_triangles());
    std::iota(all.begin(), all.end(), 0);
    current = current.bisect(MarkSet{std::move(all), MarkProvenance::uniform});
    std::vector<int> composed(current.n_triangles());
    for (std::size_t t = 0; t < composed.size(); ++t) composed[t] = to_input[current.parent()[t]];
    to_input = std::move(composed);
  }
  current.parent_ = std::move(to_input);
  return current;
}

std::vector<int> ancestor_map(const std::vector<const Mesh*>& chain)
{
  if (chain.empty()) throw std::invalid_argument("ancestor_map: empty chain");
  const Mesh& fine = *chain.back();
  std::vector<int> map(fine.n_triangles());
  std::iota(map.begin(), map.end(), 0);
  for (std::size_t i = chain.size() - 1; i > 0; --i) {
    const auto& parent = chain[i]->parent();
    for (int& t : map) {
      t = parent[t];
      if (t < 0 || static_cast<std::size_t>(t) >= chain[i - 1]->n_triangles()) {
        throw std::invalid_argument("ancestor_map: meshes are not a bisection chain");
      }
    }
  }
  return map;
}

Mesh read_mesh(std::istream& in)
{
  std::string line;
  auto next_line = [&]() -> std::istringstream {
    while (std::getline(in, line)) {
      const auto pos = line.find_first_not_of(" \t\r");
      if (pos == std::string::npos || line[pos] == '#') continue;
      return std::istringstream(line);
    }
    throw MeshError("unexpected end of mesh file");
  };
  long nv = -1, nt = -1;
  {
    auto ls = next_line();
    if (!(ls >> nv >> nt) || nv <= 0 || nt <= 0) throw MeshError("bad header, expected \"NV NT\"");
  }
  std::vector<Point> verts(static_cast<std::size_t>(nv));
  std::vector<int> flags(static_cast<std::size_t>(nv));
  for (long i = 0; i < nv; ++i) {
    auto ls = next_line();
    if (!(ls >> verts[i].x >> verts[i].y >> flags[i])) {
      throw MeshError("bad vertex line " + std::to_string(i) + ": \"" + line + "\"");
    }
  }
  std::vector<std::array<int, 3>> tris(static_cast<std::size_t>(nt));
  for (long i = 0; i < nt; ++i) {
    auto ls = next_line();
    if (!(ls >> tris[i][0] >> tris[i][1] >> tris[i][2])) {
      throw MeshError("bad triangle line " + std::to_string(i) + ": \"" + line + "\"");
    }
  }
  Mesh mesh(std::move(verts), std::move(tris));
  for (long i = 0; i < nv; ++i) {
    if ((flags[i] != 0) != static_cast<bool>(mesh.boundary_vertex()[i])) {
      throw MeshError("boundary flag of vertex " + std::to_string(i) + " disagrees with the triangulation");
    }
  }
  return mesh;
}

Mesh load_mesh(const std::filesystem::path& path)
{
  std::ifstream in(path);
  if (!in) throw MeshError("cannot open mesh file " + path.string());
  return read_mesh(in);
}

void write_mesh(std::ostream& out, const Mesh& mesh)
{
  out << mesh.n_vertices() << ' ' << mesh.n_triangles() << '\n';
  out << std::setprecision(17);
  for (std::size_t i = 0; i < mesh.n_vertices(); ++i) {
    const auto& p = mesh.vertices()[i];
    out << p.x << ' ' << p.y << ' ' << (mesh.boundary_vertex()[i] ? 1 : 0) << '\n';
  }
  for (const auto& t : mesh.triangles()) out << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
}

void save_mesh(const std::filesystem::path& path, const Mesh& mesh)
{
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  write_mesh(out, mesh);
}

void write_svg(std::ostream& out, const Mesh& mesh, const std::vector<int>& highlight)
{
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const auto& p : mesh.vertices()) {
    xmin = std::min(xmin, p.x);
    xmax = std::max(xmax, p.x);
    ymin = std::min(ymin, p.y);
    ymax = std::max(ymax, p.y);
  }
  const double size = 800.0;
  const double pad = 10.0;
  const double scale = (size - 2 * pad) / std::max(xmax - xmin, ymax - ymin);
  auto sx = [&](double x) { return pad + (x - xmin) * scale; };
  auto sy = [&](double y) { return size - pad - (y - ymin) * scale; };
  std::vector<bool> hl(mesh.n_triangles(), false);
  for (int t : highlight)
    if (t >= 0 && static_cast<std::size_t>(t) < hl.size()) hl[t] = true;

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size << "\" height=\"" << size
      << "\" viewBox=\"0 0 " << size << ' ' << size << "\">\n";
  out << std::fixed << std::setprecision(3);
  for (std::size_t t = 0; t < mesh.n_triangles(); ++t) {
    const auto& v = mesh.triangles()[t];
    out << "<polygon points=\"";
    for (int i = 0; i < 3; ++i) {
      const auto& p = mesh.vertices()[v[i]];
      out << sx(p.x) << ',' << sy(p.y) << (i < 2 ? " " : "");
    }
    out << "\" fill=\"" << (hl[t] ? "#f4a261" : "none") << "\" stroke=\"black\" stroke-width=\"0.5\"/>\n";
  }
  out << "</svg>\n";
}

Mesh builtin_mesh(const std::string& tag)
{
  if (tag == "square") {
    std::vector<Point> v;
    for (int j = 0; j < 3; ++j)
      for (int i = 0; i < 3; ++i) v.push_back({0.5 * i, 0.5 * j});
    return Mesh(std::move(v), {{0, 1, 4}, {0, 4, 3}, {1, 2, 4}, {2, 5, 4},
                               {3, 4, 6}, {4, 7, 6}, {4, 5, 8}, {4, 8, 7}});
  }
  if (tag == "square2") {
    return Mesh({{0, 0}, {1, 0}, {1, 1}, {0, 1}}, {{0, 1, 2}, {0, 2, 3}});
  }
  const std::vector<Point> lcorners = {{-1, -1}, {0, -1}, {-1, 0}, {0, 0}, {1, 0}, {-1, 1}, {0, 1}, {1, 1}};
  if (tag == "lshape") {
    auto v = lcorners;
    v.push_back({-0.5, -0.5});
    v.push_back({-0.5, 0.5});
    v.push_back({0.5, 0.5});
    return Mesh(std::move(v), {{0, 1, 8}, {1, 3, 8}, {3, 2, 8}, {2, 0, 8},
                               {2, 3, 9}, {3, 6, 9}, {6, 5, 9}, {5, 2, 9},
                               {3, 4, 10}, {4, 7, 10}, {7, 6, 10}, {6, 3, 10}});
  }
  if (tag == "lshape6") {
    return Mesh(lcorners, {{0, 1, 3}, {0, 3, 2}, {2, 3, 6}, {2, 6, 5}, {3, 4, 7}, {3, 7, 6}});
  }
  throw MeshError("unknown builtin mesh \"" + tag + "\"");
}

std::vector<std::string> builtin_mesh_names() { return {"square", "square2", "lshape", "lshape6"}; }

}  // namespace amfem
