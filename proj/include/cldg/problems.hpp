#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>

#include "cldg/frac_kernels.hpp"
#include "cldg/solver.hpp"

namespace cldg {

/// A problem together with its exact solution when one is known; the error
/// harness needs the exact solution, plain forward runs do not.
struct ManufacturedProblem {
  ProblemSpec spec;
  std::function<double(double, double, double)> exact_u;  // (x, y, t)
  bool has_exact = false;
};

/// Two-sided Riemann-Liouville derivative of order alpha in (1,2) of the
/// profile w(x) = x^3 (1-x)^3, by termwise power rule on the expansion
/// w = x^3 - 3x^4 + 3x^5 - x^6 (left) or its mirror in 1-x (right).
double bridge_frac_deriv(const FractionalExponent& alpha, Side side, double x);

/// Power terms of the combined profile D_L^alpha w + D_R^alpha w, for
/// assembling manufactured sources exactly.
std::vector<SourceProfile1D::PowerTerm> bridge_power_terms(
    const FractionalExponent& alpha);

/// 1D manufactured problem: u = e^{2t} x^3(1-x)^3, d = 1, T = 0.1.
ManufacturedProblem example1(const FractionalExponent& alpha);

/// 2D manufactured problem: u = 1000 e^t x^3(1-x)^3 y^3(1-y)^3 with
/// d1 = -1/(2 cos(alpha pi/2)), d2 = -1/(2 cos(beta pi/2)).
ManufacturedProblem example2(const FractionalExponent& alpha,
                             const FractionalExponent& beta);

/// Key-value config: dimension, alpha, beta, d/d1/d2, T, plus expressions
/// in x[,y],t for g and f (and optionally the exact solution u), or
/// g_table=<file> with two-column samples interpolated linearly.
ManufacturedProblem custom_problem(const std::map<std::string, std::string>& config);

/// Parse a key=value file ('#' comments, blank lines ignored).
std::map<std::string, std::string> parse_config_file(const std::string& path);

/// Sampled-grid residual spot check of d u/d t = d*(D_L^a + D_R^a)u + f for
/// a problem with a stored exact solution, using the Grunwald-Letnikov
/// oracle (1D only). Returns the largest residual relative to the source
/// scale; meant as a warning signal, not an exact test.
double residual_spot_check(const ManufacturedProblem& problem, int grid_n = 1024,
                           double t = 0.05);

}  // namespace cldg
