#pragma once

#include "amfem/estimator.hpp"
#include "amfem/feec.hpp"
#include "amfem/mesh.hpp"
#include "amfem/problems.hpp"
#include "amfem/saddle.hpp"

#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace amfem {

class ConfigError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

struct AfemConfig {
  double theta = 0.5;
  std::optional<double> theta_sigma;  // separate bulk parameter for the sigma criterion
  double tol = 1e-3;
  int max_iterations = 30;
  long max_dofs = 50000;
  Variant variant = Variant::hodge;
  int quad_degree = 16;
  double solver_tol = 1e-12;
  bool project_rhs = false;
  bool uniform = false;
  int uniform_rounds = 2;    // bisection rounds per uniform level (halves h)
  int reference_rounds = 2;  // extra uniform rounds for the reference solution; 0 disables it
  int threads = 1;
  bool inject_marking_fault = false;
};

/// Throws ConfigError when an invariant of the configuration is violated.
void validate(const AfemConfig& cfg);

/// Greedy Doerfler set: indices by descending value (ties by lower index)
/// until the bulk criterion sum_M >= theta * sum_T holds.
MarkSet dorfler(const std::vector<double>& indicators, double theta,
                MarkProvenance provenance = MarkProvenance::total);

/// sum over `set` >= theta * total, with a relative slack of 1e-12.
bool bulk_holds(const std::vector<double>& indicators, const std::vector<int>& set, double theta);

/// Exhaustive oracle: smallest cardinality of any subset satisfying the bulk
/// criterion. Only for n <= 20.
std::size_t minimal_bulk_cardinality(const std::vector<double>& indicators, double theta);

struct DualMark {
  MarkSet sigma;
  MarkSet total;
  MarkSet combined;
};

/// Union of the Doerfler sets of eta_sigma^2 and eta_total^2.
DualMark dual_mark(const IndicatorField& ind, double theta, std::optional<double> theta_sigma = std::nullopt);

enum class RunStatus { converged, budget_iterations, budget_dofs };
std::string to_string(RunStatus s);

struct LevelRecord {
  int level = 0;
  std::shared_ptr<const Mesh> mesh;
  ComplexPtr complex;
  MixedSolution solution;
  IndicatorField indicators;
  DualMark marks;
  bool marked = false;  // false on the last level

  long n_dofs = 0;  // dim V0 + dim V1
  long n_elements = 0;
  double h_max = 0.0;
  double min_angle = 0.0;
  double eta_total = 0.0;
  double eta_sigma = 0.0;
  double osc = 0.0;
  double graph_norm = 0.0;
  double delta_u_ratio = 0.0;  // ||delta_h u_h|| / ||u_h||
  bool bulk_sigma_ok = true;
  bool bulk_total_ok = true;

  // NaN when unavailable.
  double energy_error = std::numeric_limits<double>::quiet_NaN();
  double sigma_error = std::numeric_limits<double>::quiet_NaN();
  double u_error = std::numeric_limits<double>::quiet_NaN();
  double effectivity = std::numeric_limits<double>::quiet_NaN();
  // Errors against the reference solution.
  double ref_error = std::numeric_limits<double>::quiet_NaN();
  double ref_sigma_error = std::numeric_limits<double>::quiet_NaN();
  double ref_u_error = std::numeric_limits<double>::quiet_NaN();
};

/// Quantities of the pair (l, l+m), all on the reference mesh:
///   E    = ||(sigma_{l+m} - sigma_l, u_{l+m} - u_l)||
///   X    = <rot(u* - u_{l+m}), rot(u_{l+m} - u_l)>
///   ratio = |X| / (||grad(sigma* - sigma_{l+m})|| ||rot(u_{l+m} - u_l)||)
///   eps  = max(0, (e_{l+m}^2 - e_l^2 + E^2) / (E^2 + eta_l^2))
struct PairRecord {
  int l = 0;
  int m = 0;
  double big_e = 0.0;
  double cross = 0.0;
  double ratio = 0.0;
  double eps = 0.0;
  double h = 0.0;  // h_max of level l+m
};

struct ContractionFit {
  int m = 0;
  int windows = 0;
  double factor = 0.0;      // max_l eta_sigma^2(l+m) / eta_sigma^2(l)
  double lsq_factor = 0.0;  // exp(m * slope) of the log-linear fit of eta_sigma^2 against l
};

struct PerturbationFit {
  double q_c = 0.0;
  double c_theta = 0.0;  // smallest C_theta for which eta_sigma^2(i+1) <= q_c eta_sigma^2(i) + C_theta ||d(sigma_{i+1}-sigma_i)||^2
};

struct CompositeFit {
  int m = 0;
  int windows = 0;
  double alpha = 0.0;
  double rho = std::numeric_limits<double>::infinity();
};

struct RateFit {
  std::string quantity;
  std::string against;  // "N" or "h"
  double exponent = std::numeric_limits<double>::quiet_NaN();
  int points = 0;
};

struct RunReport {
  std::string problem;
  AfemConfig config;
  RunStatus status = RunStatus::converged;
  std::vector<LevelRecord> levels;

  bool has_reference = false;
  long reference_dofs = 0;
  std::string error_source;  // "exact" | "reference" | "none"

  std::vector<PairRecord> pairs;
  std::vector<ContractionFit> contraction;
  std::vector<PerturbationFit> perturbation;
  std::vector<CompositeFit> composite;  // best alpha for each m
  std::vector<RateFit> rates;
};

/// Algorithm: SOLVE -> ESTIMATE -> stop if eta <= tol or a budget is hit ->
/// MARK -> REFINE. Uniform runs replace MARK/REFINE by `uniform_rounds`
/// bisection rounds of every element. Post-processing (errors, reference
/// solution, pair table, fits) is done by analyze_run().
RunReport afem_run(const Mesh& initial, const Problem& problem, const AfemConfig& cfg);

/// Fills errors, reference quantities, pair table and fits of a run.
void analyze_run(RunReport& run, const Problem& problem);

/// Least-squares slope of log y against log x over the finite positive pairs.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y, int* used = nullptr);

class MarkingError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace amfem
