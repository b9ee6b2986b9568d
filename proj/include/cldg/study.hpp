#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cldg/problems.hpp"
#include "cldg/solver.hpp"

namespace cldg {

/// Step-size policy: tau_max = tau_max_coeff * h^min(alpha,beta) and
/// tau = tau_ratio * tau_max. Defaults follow the experimental setup:
/// k=1 1D (0.1, 0.1); k>=2 (0.005, 0.01); 2D k=1 (0.02, 0.1).
struct TimeStepPolicy {
  double tau_max_coeff = 0.1;
  double tau_ratio = 0.1;
  Integrator integrator = Integrator::ssp_rk3;

  static TimeStepPolicy defaults(int k, int dimension);
  TimeControls resolve(double h, double alpha, double beta, int dimension) const;
};

struct StudyConfig {
  ManufacturedProblem problem;
  std::string problem_name = "custom";
  int k = 1;
  std::vector<int> cells;  // 1/h values, strictly increasing, all >= 2
  std::optional<double> T_override;
  std::optional<double> tau_max_coeff;
  std::optional<double> tau_ratio;
  Integrator integrator = Integrator::ssp_rk3;
  std::string out_base;       // output path base; empty = no files
  std::string format = "csv"; // csv | json | both
  unsigned seed = 0;
  std::optional<long> max_steps;  // stability runs only

  void validate() const;
  TimeStepPolicy policy() const;
};

struct ConvergenceRow {
  int inv_h = 0;
  double E1 = 0.0, E2 = 0.0;
  double rate1 = std::numeric_limits<double>::quiet_NaN();
  double rate2 = std::numeric_limits<double>::quiet_NaN();
  bool failed = false;
  std::string note;
};

struct StudyResult {
  std::vector<ConvergenceRow> rows;
  double wall_time_sec = 0.0;
};

/// log(E_prev/E_curr) / log(h_prev/h_curr)
double eoc(double err_coarse, double err_fine, int inv_h_coarse, int inv_h_fine);

/// One solver run per mesh; L2 errors at T against the exact solution and
/// the observed order between consecutive rows. A stability violation is
/// recorded in its row and the study continues.
StudyResult run_convergence(const StudyConfig& config);

struct StabilityTrace {
  int inv_h = 0;
  std::vector<std::pair<double, double>> trace;
  bool non_increasing = true;
  double max_relative_increase = 0.0;
};

struct StabilityResult {
  std::vector<StabilityTrace> traces;
  bool non_increasing = true;
  double max_relative_increase = 0.0;
  double wall_time_sec = 0.0;
};

/// Zero-source runs per mesh recording the discrete energy after every
/// step and a monotonicity verdict.
StabilityResult run_stability(const StudyConfig& config);

/// Write rows as CSV (columns inv_h,E1,rate1,E2,rate2) and/or JSON with
/// study metadata; returns the written paths.
std::vector<std::string> emit_report(const StudyConfig& config,
                                     const StudyResult& result);

std::string rows_to_csv(const std::vector<ConvergenceRow>& rows);

std::vector<std::string> emit_stability_report(const StudyConfig& config,
                                               const StabilityResult& result);

}  // namespace cldg
