#include "amfem/quadrature.hpp"

#include <boost/math/special_functions/legendre.hpp>

#include <map>
#include <mutex>
#include <stdexcept>

namespace amfem {

namespace {

// n-point Gauss-Legendre rule mapped to [0, 1].
std::vector<LinePoint> gauss_legendre(int n)
{
  std::vector<LinePoint> pts;
  const auto zeros = boost::math::legendre_p_zeros<double>(n);
  auto push = [&](double x) {
    const double dp = boost::math::legendre_p_prime<double>(n, x);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    pts.push_back({0.5 * (x + 1.0), 0.5 * w});
  };
  for (double z : zeros) {
    push(z);
    if (z != 0.0) push(-z);
  }
  return pts;
}

std::mutex& cache_mutex()
{
  static std::mutex m;
  return m;
}

}  // namespace

const std::vector<LinePoint>& line_rule(int degree)
{
  if (degree < 0) throw std::invalid_argument("line_rule: negative degree");
  static std::map<int, std::vector<LinePoint>> cache;
  std::lock_guard lock(cache_mutex());
  auto it = cache.find(degree);
  if (it == cache.end()) {
    const int n = std::max(1, (degree + 2) / 2);
    it = cache.emplace(degree, gauss_legendre(n)).first;
  }
  return it->second;
}

const std::vector<TrianglePoint>& triangle_rule(int degree)
{
  if (degree < 0) throw std::invalid_argument("triangle_rule: negative degree");
  static std::map<int, std::vector<TrianglePoint>> cache;
  {
    std::lock_guard lock(cache_mutex());
    auto it = cache.find(degree);
    if (it != cache.end()) return it->second;
  }
  // x = s, y = r (1 - s); the Jacobian (1 - s) raises the degree in s by one.
  const int n = std::max(1, (degree + 3) / 2);
  const auto g = gauss_legendre(n);
  std::vector<TrianglePoint> pts;
  for (const auto& ps : g) {
    for (const auto& pr : g) {
      const double x = ps.t;
      const double y = pr.t * (1.0 - ps.t);
      pts.push_back({{1.0 - x - y, x, y}, 2.0 * ps.weight * pr.weight * (1.0 - ps.t)});
    }
  }
  std::lock_guard lock(cache_mutex());
  return cache.emplace(degree, std::move(pts)).first->second;
}

}  // namespace amfem
