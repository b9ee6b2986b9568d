#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "cldg/assembly.hpp"
#include "cldg/frac_kernels.hpp"
#include "cldg/mesh.hpp"

namespace cldg {

/// Spatial factor of a separable source: a global polynomial plus power
/// terms x^mu anchored at either domain endpoint. Loads of such profiles
/// are integrated with singularity-matched quadrature, so manufactured
/// sources project to machine precision.
struct SourceProfile1D {
  struct PowerTerm {
    Side anchor = Side::left;  // left: coeff * x^mu, right: coeff * (1-x)^mu
    double exponent = 0.0;
    double coeff = 0.0;
  };
  std::vector<double> poly;  // sum poly[m] * x^m
  std::vector<PowerTerm> powers;

  double operator()(double x) const;
};

/// Source of the form time_factor(t) * sum_i X_i(x) * Y_i(y); the y factor
/// is ignored in one dimension.
struct SeparableSource {
  struct Term {
    SourceProfile1D x;
    SourceProfile1D y;
  };
  std::function<double(double)> time_factor;
  std::vector<Term> terms;

  double value(double x, double y, double t, int dimension) const;
};

struct ProblemSpec {
  int dimension = 1;
  double alpha = 1.5;  // in (1,2)
  double beta = 1.5;   // in (1,2); ignored in 1D
  double d1 = 1.0;     // diffusivity (x direction in 2D)
  double d2 = 1.0;
  double T = 0.1;
  std::function<double(double, double)> g;          // initial datum (x,y)
  std::function<double(double, double, double)> f;  // source (x,y,t)
  std::optional<SeparableSource> separable_f;

  void validate() const;
};

enum class Integrator { forward_euler, ssp_rk3 };

/// Resolved step sizes. tau_max is both the relaxation scale of the scheme
/// and the CFL bound on the step size.
struct TimeControls {
  double tau_max = 0.0;
  double tau = 0.0;
  Integrator integrator = Integrator::ssp_rk3;
  // 1D runs with a time-separable source may step through a precomputed
  // one-step matrix; the result is identical, stage by stage.
  bool allow_dense_fast_path = true;

  void validate() const {
    if (!(tau > 0.0 && tau <= tau_max))
      throw std::invalid_argument("TimeControls: need 0 < tau <= tau_max");
  }
};

struct SolverState {
  DGField u1;  // primal
  DGField u2;  // dual
  double t = 0.0;
  std::vector<std::pair<double, double>> energy_trace;  // (t, |u1|^2+|u2|^2)
};

/// ||u1||^2 + ||u2||^2; the coefficient sum of squares for this basis.
double energy(const SolverState& state);

struct AuxiliaryFluxes {
  // dual-mesh fluxes driven by u1, primal-mesh fluxes driven by u2
  Eigen::MatrixXd qL2x, qR2x, qL2y, qR2y;
  Eigen::MatrixXd qL1x, qR1x, qL1y, qR1y;
};

/// Assembled, time-independent pieces of the scheme for one mesh pair.
/// Factorizations are computed once and shared by every step.
struct Operators {
  OverlappingMesh mesh;
  BasisSpec basis;
  double d1 = 1.0, d2 = 1.0;
  double tau_max = 0.0;
  FractionalGram gram_p[2];
  FractionalGram gram_d[2];
  CouplingOperator cu_dp, cu_pd;  // zero exterior trace (u-type transport)
  CouplingOperator cq_pd, cq_dp;  // interior trace (flux-type transport)
  OverlapMass m_pd, m_dp;

  bool separable_source = false;
  std::function<double(double)> time_factor;
  Eigen::MatrixXd load_profile_p, load_profile_d;
  std::function<double(double, double, double)> f;
};

Operators build_operators(const ProblemSpec& problem, const OverlappingMesh& mesh,
                          const BasisSpec& basis, double tau_max);

AuxiliaryFluxes compute_aux(const SolverState& state, const Operators& ops);

/// Right-hand sides of the coefficient ODEs for both fields at time t.
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> semidiscrete_rhs(
    const SolverState& state, double t, const Operators& ops);

/// Linear part only (zero source); used by tests and the dense fast path.
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> semidiscrete_rhs_linear(
    const Eigen::MatrixXd& u1, const Eigen::MatrixXd& u2, const Operators& ops);

/// Load vector of the source on one mesh at time t (exact for separable
/// sources, k+3-point quadrature otherwise).
Eigen::MatrixXd source_load(const Operators& ops, MeshTag tag, double t);

struct StabilityViolation : std::runtime_error {
  StabilityViolation(double t_, long step_);
  double t;
  long step;
};

/// One explicit step; appends an energy sample. Throws StabilityViolation
/// when a non-finite coefficient appears.
SolverState step(SolverState state, const TimeControls& controls,
                 const Operators& ops);

/// Project g on both meshes, integrate to T (final step shortened to land
/// exactly on T) and return the final state with the full energy trace.
SolverState run(const ProblemSpec& problem, const OverlappingMesh& mesh,
                const BasisSpec& basis, const TimeControls& controls);

/// Exact projection of a source profile onto a mesh line.
Eigen::VectorXd project_profile_line(const SourceProfile1D& profile,
                                     const MeshLine& line, const BasisSpec& basis);

}  // namespace cldg
