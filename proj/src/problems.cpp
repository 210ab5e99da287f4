#include "amfem/problems.hpp"

#include "amfem/quadrature.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace amfem {

std::string to_string(Variant v) { return v == Variant::hodge ? "hodge" : "maxwell"; }

Variant parse_variant(const std::string& s)
{
  if (s == "hodge") return Variant::hodge;
  if (s == "maxwell") return Variant::maxwell;
  throw std::invalid_argument("unknown variant '" + s + "' (expected hodge or maxwell)");
}

namespace {

Problem from_fields(std::string name, std::string description, std::string domain, std::string mesh, Variant variant,
                    std::string regularity, FieldSample (*fields)(double, double))
{
  Problem p;
  p.name = std::move(name);
  p.description = std::move(description);
  p.domain = std::move(domain);
  p.default_mesh = std::move(mesh);
  p.variant = variant;
  p.regularity = std::move(regularity);
  p.f = [fields](Point x, Point) { return fields(x.x, x.y).f; };
  p.div_f = [fields](Point x, Point) { return fields(x.x, x.y).div_f; };
  p.exact = [fields](Point x) { return fields(x.x, x.y); };
  return p;
}

}  // namespace

std::vector<Problem> problem_catalog()
{
  std::vector<Problem> out;
  out.push_back(from_fields("M1",
                            "unit square, u = grad(sin(pi x) sin(pi y)) + rot*(sin^2(pi x) sin^2(pi y)), "
                            "sigma = -div u",
                            "unit_square", "square", Variant::hodge, "smooth", detail::smooth_hodge_fields));
  out.push_back(from_fields("M2", "unit square, Maxwell: u = rot*(sin^2(pi x) sin^2(pi y)), f = rot*(rot u)",
                            "unit_square", "square", Variant::maxwell, "smooth", detail::smooth_maxwell_fields));

  Problem s1;
  s1.name = "S1";
  s1.description = "L-shape, f = (x - y, x + y), no closed-form solution";
  s1.domain = "l_shape";
  s1.default_mesh = "lshape";
  s1.f = [](Point x, Point) { return Vec2{x.x - x.y, x.x + x.y}; };
  s1.div_f = [](Point, Point) { return 2.0; };
  out.push_back(std::move(s1));

  out.push_back(from_fields("S2",
                            "L-shape, u = grad(-(3/20) r^(8/3) sin(2 theta/3) B^3) + rot*(x^2 y^2 (1-x^2)^2 (1-y^2)^2), "
                            "B = (1-x^2)(1-y^2); sigma ~ r^(2/3) at the reentrant corner",
                            "l_shape", "lshape", Variant::hodge, "singular", detail::singular_lshape_fields));

  Problem z0;
  z0.name = "Z0";
  z0.description = "unit square, f = 0";
  z0.domain = "unit_square";
  z0.default_mesh = "square";
  z0.regularity = "smooth";
  z0.f = [](Point, Point) { return Vec2{0.0, 0.0}; };
  z0.div_f = [](Point, Point) { return 0.0; };
  z0.exact = [](Point) { return FieldSample{}; };
  out.push_back(std::move(z0));
  return out;
}

Problem find_problem(const std::string& name)
{
  for (auto& p : problem_catalog())
    if (p.name == name) return p;
  throw std::invalid_argument("unknown problem '" + name + "' (expected M1, M2, S1, S2 or Z0)");
}

namespace {

struct Sample {
  Point x;
  Vec2 f;
};

std::vector<Sample> read_samples(const std::filesystem::path& path)
{
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open source table " + path.string());
  std::vector<Sample> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ss(line);
    Sample s;
    if (!(ss >> s.x.x >> s.x.y >> s.f[0] >> s.f[1])) {
      if (out.empty() && lineno == 1) continue;  // header
      throw std::invalid_argument(path.string() + ":" + std::to_string(lineno) + ": expected x,y,fx,fy");
    }
    out.push_back(s);
  }
  if (out.empty()) throw std::invalid_argument("source table " + path.string() + " has no samples");
  return out;
}

// f = c + A (x - x0) on one triangle of the fitting mesh.
struct Piece {
  Point x0;
  Vec2 c{};
  std::array<Vec2, 2> a{};  // a[k] = gradient of component k
};

struct PiecewiseSource {
  std::vector<ElementGeometry> geometry;
  std::vector<Piece> pieces;

  int locate(Point p) const
  {
    thread_local const PiecewiseSource* last_owner = nullptr;
    thread_local int last = -1;
    auto inside = [&](int t) {
      const auto b = geometry[t].barycentric(p);
      return std::min({b[0], b[1], b[2]});
    };
    if (last_owner == this && last >= 0 && inside(last) >= -1e-12) return last;
    int best = 0;
    double best_val = -std::numeric_limits<double>::infinity();
    for (int t = 0; t < static_cast<int>(geometry.size()); ++t) {
      const double v = inside(t);
      if (v > best_val) {
        best_val = v;
        best = t;
      }
    }
    last_owner = this;
    last = best;
    return best;
  }
};

}  // namespace

Problem load_source_table(const std::filesystem::path& path, const Mesh& mesh, int degree, Variant variant)
{
  if (degree != 0 && degree != 1) throw std::invalid_argument("source table fit degree must be 0 or 1");
  const auto samples = read_samples(path);
  auto src = std::make_shared<PiecewiseSource>();
  const int nt = static_cast<int>(mesh.n_triangles());
  for (int t = 0; t < nt; ++t) src->geometry.push_back(element_geometry(mesh, t));

  const int ncoef = degree == 0 ? 1 : 3;
  for (int t = 0; t < nt; ++t) {
    const auto& g = src->geometry[t];
    Piece piece;
    piece.x0 = mesh.centroid(t);
    std::vector<int> use;
    for (int i = 0; i < static_cast<int>(samples.size()); ++i) {
      const auto b = g.barycentric(samples[i].x);
      if (std::min({b[0], b[1], b[2]}) >= -1e-12) use.push_back(i);
    }
    if (static_cast<int>(use.size()) < 2 * ncoef) {
      std::vector<int> order(samples.size());
      for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
      auto d2 = [&](int i) {
        return std::pow(samples[i].x.x - piece.x0.x, 2) + std::pow(samples[i].x.y - piece.x0.y, 2);
      };
      std::stable_sort(order.begin(), order.end(), [&](int i, int j) { return d2(i) < d2(j); });
      order.resize(std::min<std::size_t>(order.size(), 2 * ncoef));
      use = order;
    }
    Eigen::MatrixXd a(use.size(), ncoef);
    Eigen::MatrixXd rhs(use.size(), 2);
    for (std::size_t r = 0; r < use.size(); ++r) {
      const auto& s = samples[use[r]];
      a(r, 0) = 1.0;
      if (degree == 1) {
        a(r, 1) = s.x.x - piece.x0.x;
        a(r, 2) = s.x.y - piece.x0.y;
      }
      rhs(r, 0) = s.f[0];
      rhs(r, 1) = s.f[1];
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
    Eigen::MatrixXd coef;
    if (qr.rank() < ncoef) {
      // Collinear samples: fall back to the mean.
      coef = Eigen::MatrixXd::Zero(ncoef, 2);
      coef.row(0) = rhs.colwise().mean();
    } else {
      coef = qr.solve(rhs);
    }
    piece.c = {coef(0, 0), coef(0, 1)};
    if (degree == 1) {
      piece.a[0] = {coef(1, 0), coef(2, 0)};
      piece.a[1] = {coef(1, 1), coef(2, 1)};
    }
    src->pieces.push_back(piece);
  }

  Problem p;
  p.name = "custom";
  p.description = "source fitted from " + path.filename().string() + " (degree " + std::to_string(degree) + ")";
  p.domain = "custom";
  p.default_mesh = "";
  p.variant = variant;
  p.f = [src](Point x, Point side) {
    const Piece& q = src->pieces[src->locate(side)];
    const double dx = x.x - q.x0.x;
    const double dy = x.y - q.x0.y;
    return Vec2{q.c[0] + q.a[0][0] * dx + q.a[0][1] * dy, q.c[1] + q.a[1][0] * dx + q.a[1][1] * dy};
  };
  p.div_f = [src](Point, Point side) {
    const Piece& q = src->pieces[src->locate(side)];
    return q.a[0][0] + q.a[1][1];
  };
  return p;
}

ErrorParts eval_error(const Problem& problem, const FormVector& sigma, const FormVector& u, int quad_degree)
{
  if (!problem.has_exact()) throw std::invalid_argument("problem " + problem.name + " has no exact solution");
  const Mesh& mesh = *sigma.complex->mesh;
  const auto& rule = triangle_rule(quad_degree);
  double es = 0.0;
  double eu = 0.0;
  for (int t = 0; t < static_cast<int>(mesh.n_triangles()); ++t) {
    const auto g = element_geometry(mesh, t);
    const Vec2 gs = grad_p1(sigma, t);
    const double ru = rot_whitney(u, t);
    double ks = 0.0;
    double ku = 0.0;
    for (const auto& q : rule) {
      const FieldSample ex = problem.exact(g.map(q.bary));
      ks += q.weight * (std::pow(ex.grad_sigma[0] - gs[0], 2) + std::pow(ex.grad_sigma[1] - gs[1], 2));
      ku += q.weight * std::pow(ex.rot_u - ru, 2);
    }
    es += g.area * ks;
    eu += g.area * ku;
  }
  return {std::sqrt(es + eu), std::sqrt(es), std::sqrt(eu)};
}

}  // namespace amfem
