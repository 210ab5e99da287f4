#include "amfem/quadrature.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace amfem;

namespace {

double factorial(int n) { return std::tgamma(n + 1.0); }

}  // namespace

// Reference triangle (0,0), (1,0), (0,1): integral of x^a y^b = a! b! / (a+b+2)!.
TEST(Quadrature, TriangleMonomials)
{
  for (int deg : {1, 2, 4, 7, 10, 16}) {
    const auto& rule = triangle_rule(deg);
    for (int a = 0; a <= deg; ++a)
      for (int b = 0; a + b <= deg; ++b) {
        double s = 0.0;
        for (const auto& q : rule) s += q.weight * std::pow(q.bary[1], a) * std::pow(q.bary[2], b);
        s *= 0.5;
        const double exact = factorial(a) * factorial(b) / factorial(a + b + 2);
        EXPECT_NEAR(s, exact, 1e-14) << "deg " << deg << " a " << a << " b " << b;
      }
  }
}

TEST(Quadrature, LineMonomials)
{
  for (int deg : {0, 1, 3, 8, 16}) {
    const auto& rule = line_rule(deg);
    for (int a = 0; a <= deg; ++a) {
      double s = 0.0;
      for (const auto& q : rule) s += q.weight * std::pow(q.t, a);
      EXPECT_NEAR(s, 1.0 / (a + 1), 1e-14);
    }
  }
}

TEST(Quadrature, BarycentricsSumToOne)
{
  for (const auto& q : triangle_rule(9)) {
    EXPECT_NEAR(q.bary[0] + q.bary[1] + q.bary[2], 1.0, 1e-15);
    EXPECT_GT(q.weight, 0.0);
  }
}
