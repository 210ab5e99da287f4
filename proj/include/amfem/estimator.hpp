#pragma once

#include "amfem/feec.hpp"
#include "amfem/problems.hpp"
#include "amfem/saddle.hpp"

#include <iosfwd>

namespace amfem {

/// Element indicators of the residual estimators for k = 1 in 2D:
///
///   eta_sigma^2(K) = h_K^2 ||div f - div grad sigma_h||_K^2
///                  + 1/2 sum_{e in dK interior} h_e ||[(f - grad sigma_h) . n_e]||_e^2
///   eta_total^2(K) = eta_sigma^2(K) + h_K^2 ||f - grad sigma_h - rot* rot u_h||_K^2
///                  + 1/2 sum_{e in dK interior} h_e ||[rot u_h]||_e^2
///   osc^2(K)       = h_K^2 (||f - Q0 f||_K^2 + ||div f - Q1 div f||_K^2)
///
/// with h_K = |K|^{1/2}, h_e = |e|, and Q0, Q1 the element L2 projections
/// onto constants and linears. Boundary edges carry no jump terms.
struct IndicatorField {
  std::vector<double> eta_total_sq;
  std::vector<double> eta_sigma_sq;
  std::vector<double> osc_sq;
  int quad_degree = 0;

  [[nodiscard]] double total_eta_sq() const;
  [[nodiscard]] double total_eta_sigma_sq() const;
  [[nodiscard]] double total_osc_sq() const;
};

IndicatorField estimate(const Complex& cx, const FormVector& sigma, const FormVector& u, const Problem& problem,
                        int quad_degree, int threads = 1);
inline IndicatorField estimate(const Complex& cx, const MixedSolution& sol, const Problem& problem, int quad_degree,
                               int threads = 1)
{
  return estimate(cx, sol.sigma, sol.u, problem, quad_degree, threads);
}

std::vector<double> oscillation(const Mesh& mesh, const Problem& problem, int quad_degree, int threads = 1);

class ReliabilityViolation : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// err / sqrt(sum eta_total^2). Throws ReliabilityViolation for a vanishing
/// estimator with nonzero error; returns 0 when both vanish.
double effectivity(double err, const IndicatorField& ind);

/// Sum in ascending order of magnitude, so totals do not depend on how the
/// elements are numbered beyond their values.
double sorted_sum(std::vector<double> v);

/// CSV with header "element_id,eta_total_sq,eta_sigma_sq,osc_sq".
void write_indicators_csv(std::ostream& out, const IndicatorField& ind);

}  // namespace amfem
