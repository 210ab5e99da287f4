#pragma once

#include "amfem/adaptivity.hpp"
#include "amfem/feec.hpp"
#include "amfem/problems.hpp"

#include <optional>
#include <string>
#include <vector>

namespace amfem {

struct CheckEntry {
  std::string name;
  bool passed = false;
  double measured = 0.0;
  double threshold = 0.0;
  std::string comparison;  // "<=", "<", ">", ">=", "==", "in"
  double upper = 0.0;      // second bound for "in"
  bool surrogate = false;  // measured against a reference-mesh stand-in for the exact solution
  std::string detail;
};

struct CheckReport {
  std::vector<CheckEntry> checks;

  [[nodiscard]] bool passed() const;
  /// Records a check; the pass flag follows from measured, threshold and comparison.
  CheckEntry& add(std::string name, double measured, std::string comparison, double threshold,
                  std::string detail = {}, bool surrogate = false);
  CheckEntry& add_range(std::string name, double measured, double lo, double hi, std::string detail = {},
                        bool surrogate = false);
  void merge(const CheckReport& other);
};

enum class Fault { none, d0_sign, non_nested, marking };
std::string to_string(Fault f);
/// "none", "d0-sign", "non-nested", "marking"
Fault parse_fault(const std::string& s);

/// d o d = 0 bit-exactly, rank(D0) + rank(D1) = dim V1 (dense, small meshes
/// only), SPD mass matrices, M1-orthogonality of the Hodge split of a random
/// 1-form. `inject_d0_sign` flips the sign of one entry of D0 first.
CheckReport check_complex(const Complex& cx, const std::string& label, bool inject_d0_sign = false,
                          unsigned seed = 12345);

/// Poincare constants from subspace iteration against a dense generalized
/// eigensolve (guarded by max_dense_dofs).
CheckReport check_poincare(const Complex& cx, const std::string& label, int max_dense_dofs = 2000);

struct OrthogonalityOptions {
  Variant variant = Variant::hodge;
  int quad_degree = 16;
  double solver_tol = 1e-12;
  int reference_rounds = 2;
  int threads = 1;
  bool inject_non_nested = false;
  unsigned seed = 12345;
};

/// For nested meshes T_H (coarse) and T_h (fine):
///  - discrete identity max_j |<D0(sigma_h - sigma_H), D0 tau_j>| over the
///    coarse basis, relative to ||(sigma_h, u_h)|| ||D0 tau_j||;
///  - the same identity between the reference solution and sigma_h;
///  - Pythagoras |e_H^2 - e_h^2 - ||d(sigma_h - sigma_H)||^2| / e_H^2 with
///    e = ||d(sigma* - sigma)||, sigma* on T_h refined reference_rounds times.
/// With inject_non_nested the new fine vertices are displaced randomly.
CheckReport check_orthogonality(const Problem& problem, const Mesh& coarse, const Mesh& fine,
                                const std::vector<int>& fine_to_coarse, const OrthogonalityOptions& opts,
                                const std::string& label);

class InsufficientDataError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Ratio |X| / (||grad(sigma* - sigma_{l+1})|| ||rot(u_{l+1} - u_l)||) of
/// consecutive levels: recorded, decreasing up to `slack`, positive log-log
/// slope against h; and the fitted quasi-orthogonality epsilon below 1.
/// Needs a reference solution and at least 4 levels.
CheckReport check_quasi_orthogonality(const RunReport& run, double slack = 0.10);

/// Some window m <= max_window gives a geometric factor of eta_sigma^2 below
/// 1, and (when errors are available) the composite e^2 + alpha eta^2
/// contracts with rho <= rho_max. Needs at least 3 levels.
CheckReport check_contraction(const RunReport& run, int max_window = 5, double rho_max = 0.95);

/// Both bulk criteria at every marked level; greedy sets minimal by the
/// exhaustive oracle on levels with <= 15 elements and on `random_instances`
/// random indicator vectors.
CheckReport check_marking(const RunReport& run, int random_instances = 200, unsigned seed = 12345);

struct RateExpectation {
  bool check_h_rate = false;  // energy error against h in [h_lo, h_hi]
  double h_lo = 0.9, h_hi = 1.1;
  bool check_n_range = false;  // energy error against N in [n_lo, n_hi]
  double n_lo = -0.58, n_hi = -0.42;
  bool check_n_above = false;  // energy error against N > n_above
  double n_above = -0.42;
  bool check_effectivity = false;  // max/min - 1 <= effectivity_variation
  double effectivity_variation = 0.25;
};

CheckReport convergence_table(const RunReport& run, const std::string& label, const RateExpectation& expect);

/// ||delta_h u_h|| <= tol ||u_h|| at every level.
CheckReport check_maxwell(const RunReport& run, double tol = 1e-9);

struct SuiteOptions {
  AfemConfig afem;         // adaptive run; the uniform run copies it
  int pre_refine = 2;      // uniform bisection rounds applied to the initial mesh before the runs
  int uniform_levels = 5;
  int orthogonality_pairs = 3;
  /// Subset of "complex", "poincare", "orthogonality", "quasi", "convergence",
  /// "marking", "contraction", "maxwell"; empty runs all of them.
  std::vector<std::string> checks;
  Fault fault = Fault::none;
  unsigned seed = 12345;
};

struct SuiteResult {
  CheckReport checks;
  std::optional<RunReport> uniform;
  std::optional<RunReport> adaptive;
};

/// Runs the selected checks for one problem. Rate expectations follow the
/// problem regularity: smooth problems with an exact solution get the h-rate
/// and effectivity checks on the uniform run, singular ones the N-exponent
/// comparison of the adaptive and uniform runs.
SuiteResult verify_suite(const Problem& problem, const Mesh& initial, const SuiteOptions& opts);

}  // namespace amfem
