#include "cldg/solver.hpp"

#include <cmath>
#include <string>

#include "cldg/quadrature.hpp"

namespace cldg {

double SourceProfile1D::operator()(double x) const {
  double v = 0.0;
  for (int m = static_cast<int>(poly.size()) - 1; m >= 0; --m) v = v * x + poly[m];
  for (const PowerTerm& p : powers) {
    const double u = (p.anchor == Side::left) ? x : 1.0 - x;
    v += p.coeff * std::pow(u, p.exponent);
  }
  return v;
}

double SeparableSource::value(double x, double y, double t, int dimension) const {
  double v = 0.0;
  for (const Term& term : terms)
    v += term.x(x) * (dimension == 2 ? term.y(y) : 1.0);
  return time_factor(t) * v;
}

void ProblemSpec::validate() const {
  FractionalExponent::diffusion_order(alpha);
  if (dimension == 2) FractionalExponent::diffusion_order(beta);
  if (dimension != 1 && dimension != 2)
    throw std::invalid_argument("ProblemSpec: dimension must be 1 or 2");
  if (!(d1 > 0.0) || (dimension == 2 && !(d2 > 0.0)))
    throw std::invalid_argument("ProblemSpec: diffusivities must be positive");
  if (!(T > 0.0)) throw std::invalid_argument("ProblemSpec: T must be positive");
  if (!g) throw std::invalid_argument("ProblemSpec: missing initial datum g");
  if (!f && !separable_f)
    throw std::invalid_argument("ProblemSpec: missing source f");
}

double energy(const SolverState& state) {
  return state.u1.coeff.squaredNorm() + state.u2.coeff.squaredNorm();
}

Eigen::VectorXd project_profile_line(const SourceProfile1D& profile,
                                     const MeshLine& line, const BasisSpec& basis) {
  const int nm = basis.modes();
  Eigen::VectorXd out = Eigen::VectorXd::Zero(line.cells() * nm);
  const int deg = static_cast<int>(profile.poly.size()) - 1;
  const int npoly = std::max(basis.k + 3, (deg + basis.k) / 2 + 2);
  const int npow = 14;
  for (int i = 0; i < line.cells(); ++i) {
    const double a = line.left(i), b = line.right(i), w = line.width(i);
    if (!profile.poly.empty()) {
      const QuadRule& rule = gauss_legendre(npoly);
      for (int q = 0; q < npoly; ++q) {
        const double x = a + w * rule.nodes[q];
        double v = 0.0;
        for (int m = deg; m >= 0; --m) v = v * x + profile.poly[m];
        const double wf = w * rule.weights[q] * v;
        for (int m = 0; m < nm; ++m) out[i * nm + m] += wf * basis_value(m, a, b, x);
      }
    }
    for (const SourceProfile1D::PowerTerm& p : profile.powers) {
      // singular weight matched on the anchored cell, plain Gauss elsewhere
      const bool anchored = (p.anchor == Side::left) ? (a == 0.0) : (b == 1.0);
      const double le = (anchored && p.anchor == Side::left) ? p.exponent : 0.0;
      const double re = (anchored && p.anchor == Side::right) ? p.exponent : 0.0;
      const QuadRule& rule = gauss_jacobi(npow, le, re);
      const double scale = std::pow(w, 1.0 + le + re);
      for (int q = 0; q < npow; ++q) {
        const double x = a + w * rule.nodes[q];
        double v = p.coeff;
        if (!anchored) {
          const double u = (p.anchor == Side::left) ? x : 1.0 - x;
          v *= std::pow(u, p.exponent);
        }
        const double wf = scale * rule.weights[q] * v;
        for (int m = 0; m < nm; ++m) out[i * nm + m] += wf * basis_value(m, a, b, x);
      }
    }
  }
  return out;
}

namespace {

Eigen::MatrixXd project_separable(const SeparableSource& src,
                                  const OverlappingMesh& mesh, MeshTag tag,
                                  const BasisSpec& basis) {
  const MeshLine& line = mesh.line(tag);
  const int nx = dofs_per_line(line, basis);
  if (mesh.dimension == 1) {
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(nx, 1);
    for (const auto& term : src.terms)
      out.col(0) += project_profile_line(term.x, line, basis);
    return out;
  }
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(nx, nx);
  for (const auto& term : src.terms) {
    Eigen::VectorXd px = project_profile_line(term.x, line, basis);
    Eigen::VectorXd py = project_profile_line(term.y, line, basis);
    out.noalias() += px * py.transpose();
  }
  return out;
}

}  // namespace

Operators build_operators(const ProblemSpec& problem, const OverlappingMesh& mesh,
                          const BasisSpec& basis, double tau_max) {
  problem.validate();
  if (problem.dimension != mesh.dimension)
    throw std::invalid_argument("build_operators: dimension mismatch");
  if (!(tau_max > 0.0))
    throw std::invalid_argument("build_operators: tau_max must be positive");
  Operators ops;
  ops.mesh = mesh;
  ops.basis = basis;
  ops.d1 = problem.d1;
  ops.d2 = (problem.dimension == 2) ? problem.d2 : problem.d1;
  ops.tau_max = tau_max;

  const auto sx = FractionalExponent::gram_order(0.5 * (2.0 - problem.alpha));
  ops.gram_p[0] = assemble_gram(mesh, MeshTag::primal, basis, sx, 0);
  ops.gram_d[0] = assemble_gram(mesh, MeshTag::dual, basis, sx, 0);
  if (mesh.dimension == 2) {
    if (problem.beta == problem.alpha) {
      ops.gram_p[1] = ops.gram_p[0];
      ops.gram_p[1].direction = 1;
      ops.gram_d[1] = ops.gram_d[0];
      ops.gram_d[1].direction = 1;
    } else {
      const auto sy = FractionalExponent::gram_order(0.5 * (2.0 - problem.beta));
      ops.gram_p[1] = assemble_gram(mesh, MeshTag::primal, basis, sy, 1);
      ops.gram_d[1] = assemble_gram(mesh, MeshTag::dual, basis, sy, 1);
    }
  }

  ops.cu_dp = assemble_coupling(mesh, MeshTag::primal, MeshTag::dual, basis,
                                BoundaryTrace::zero_exterior);
  ops.cu_pd = assemble_coupling(mesh, MeshTag::dual, MeshTag::primal, basis,
                                BoundaryTrace::zero_exterior);
  ops.cq_pd = assemble_coupling(mesh, MeshTag::dual, MeshTag::primal, basis,
                                BoundaryTrace::interior);
  ops.cq_dp = assemble_coupling(mesh, MeshTag::primal, MeshTag::dual, basis,
                                BoundaryTrace::interior);
  ops.m_pd = assemble_overlap_mass(mesh, MeshTag::dual, MeshTag::primal, basis);
  ops.m_dp = assemble_overlap_mass(mesh, MeshTag::primal, MeshTag::dual, basis);

  if (problem.separable_f) {
    ops.separable_source = true;
    ops.time_factor = problem.separable_f->time_factor;
    ops.load_profile_p = project_separable(*problem.separable_f, mesh,
                                           MeshTag::primal, basis);
    ops.load_profile_d = project_separable(*problem.separable_f, mesh,
                                           MeshTag::dual, basis);
  } else {
    ops.f = problem.f;
  }
  return ops;
}

AuxiliaryFluxes compute_aux(const SolverState& state, const Operators& ops) {
  AuxiliaryFluxes aux;
  if (ops.mesh.dimension == 1) {
    const Eigen::MatrixXd rhs2 = ops.cu_dp.matrix * state.u1.coeff;
    aux.qL2x = ops.gram_d[0].solve(rhs2);
    aux.qR2x = ops.gram_d[0].solve_transposed(rhs2);
    const Eigen::MatrixXd rhs1 = ops.cu_pd.matrix * state.u2.coeff;
    aux.qL1x = ops.gram_p[0].solve(rhs1);
    aux.qR1x = ops.gram_p[0].solve_transposed(rhs1);
    return aux;
  }
  const Eigen::MatrixXd& u1 = state.u1.coeff;
  const Eigen::MatrixXd& u2 = state.u2.coeff;
  {
    const Eigen::MatrixXd rhs_x = ops.cu_dp.matrix * u1 * ops.m_dp.matrix.transpose();
    aux.qL2x = ops.gram_d[0].solve(rhs_x);
    aux.qR2x = ops.gram_d[0].solve_transposed(rhs_x);
    const Eigen::MatrixXd rhs_y = ops.m_dp.matrix * u1 * ops.cu_dp.matrix.transpose();
    aux.qL2y = ops.gram_d[1].solve(rhs_y.transpose()).transpose();
    aux.qR2y = ops.gram_d[1].solve_transposed(rhs_y.transpose()).transpose();
  }
  {
    const Eigen::MatrixXd rhs_x = ops.cu_pd.matrix * u2 * ops.m_pd.matrix.transpose();
    aux.qL1x = ops.gram_p[0].solve(rhs_x);
    aux.qR1x = ops.gram_p[0].solve_transposed(rhs_x);
    const Eigen::MatrixXd rhs_y = ops.m_pd.matrix * u2 * ops.cu_pd.matrix.transpose();
    aux.qL1y = ops.gram_p[1].solve(rhs_y.transpose()).transpose();
    aux.qR1y = ops.gram_p[1].solve_transposed(rhs_y.transpose()).transpose();
  }
  return aux;
}

Eigen::MatrixXd source_load(const Operators& ops, MeshTag tag, double t) {
  if (ops.separable_source) {
    const Eigen::MatrixXd& profile =
        (tag == MeshTag::primal) ? ops.load_profile_p : ops.load_profile_d;
    return ops.time_factor(t) * profile;
  }
  const BasisSpec& basis = ops.basis;
  if (ops.mesh.dimension == 1) {
    DGField load = l2_project(
        [&](double x) { return ops.f(x, 0.0, t); }, tag, ops.mesh, basis);
    return load.coeff;
  }
  DGField load = l2_project(
      [&](double x, double y) { return ops.f(x, y, t); }, tag, ops.mesh, basis);
  return load.coeff;
}

std::pair<Eigen::MatrixXd, Eigen::MatrixXd> semidiscrete_rhs_linear(
    const Eigen::MatrixXd& u1, const Eigen::MatrixXd& u2, const Operators& ops) {
  SolverState s;
  s.u1 = zero_field(ops.mesh, MeshTag::primal, ops.basis);
  s.u2 = zero_field(ops.mesh, MeshTag::dual, ops.basis);
  s.u1.coeff = u1;
  s.u2.coeff = u2;
  const AuxiliaryFluxes aux = compute_aux(s, ops);
  const double r = 1.0 / ops.tau_max;
  if (ops.mesh.dimension == 1) {
    Eigen::MatrixXd du1 = r * (ops.m_pd.matrix * u2 - u1);
    du1.noalias() += ops.d1 * (ops.cq_pd.matrix * (aux.qL2x + aux.qR2x));
    Eigen::MatrixXd du2 = r * (ops.m_dp.matrix * u1 - u2);
    du2.noalias() += ops.d1 * (ops.cq_dp.matrix * (aux.qL1x + aux.qR1x));
    return {std::move(du1), std::move(du2)};
  }
  Eigen::MatrixXd du1 = r * (ops.m_pd.matrix * u2 * ops.m_pd.matrix.transpose() - u1);
  du1.noalias() +=
      ops.d1 * (ops.cq_pd.matrix * (aux.qL2x + aux.qR2x) * ops.m_pd.matrix.transpose());
  du1.noalias() +=
      ops.d2 * (ops.m_pd.matrix * (aux.qL2y + aux.qR2y) * ops.cq_pd.matrix.transpose());
  Eigen::MatrixXd du2 = r * (ops.m_dp.matrix * u1 * ops.m_dp.matrix.transpose() - u2);
  du2.noalias() +=
      ops.d1 * (ops.cq_dp.matrix * (aux.qL1x + aux.qR1x) * ops.m_dp.matrix.transpose());
  du2.noalias() +=
      ops.d2 * (ops.m_dp.matrix * (aux.qL1y + aux.qR1y) * ops.cq_dp.matrix.transpose());
  return {std::move(du1), std::move(du2)};
}

std::pair<Eigen::MatrixXd, Eigen::MatrixXd> semidiscrete_rhs(
    const SolverState& state, double t, const Operators& ops) {
  auto [du1, du2] = semidiscrete_rhs_linear(state.u1.coeff, state.u2.coeff, ops);
  du1 += source_load(ops, MeshTag::primal, t);
  du2 += source_load(ops, MeshTag::dual, t);
  return {std::move(du1), std::move(du2)};
}

StabilityViolation::StabilityViolation(double t_, long step_)
    : std::runtime_error("stability violation: non-finite coefficients at t=" +
                         std::to_string(t_) + " (step " + std::to_string(step_) +
                         ")"),
      t(t_),
      step(step_) {}

namespace {

void advance(SolverState& state, double tau, const TimeControls& controls,
             const Operators& ops, long step_index) {
  const double t = state.t;
  if (controls.integrator == Integrator::forward_euler) {
    auto [k1, l1] = semidiscrete_rhs(state, t, ops);
    state.u1.coeff += tau * k1;
    state.u2.coeff += tau * l1;
  } else {
    const Eigen::MatrixXd u1 = state.u1.coeff;
    const Eigen::MatrixXd u2 = state.u2.coeff;
    auto [k1, l1] = semidiscrete_rhs(state, t, ops);
    state.u1.coeff = u1 + tau * k1;
    state.u2.coeff = u2 + tau * l1;
    auto [k2, l2] = semidiscrete_rhs(state, t + tau, ops);
    state.u1.coeff = 0.75 * u1 + 0.25 * (state.u1.coeff + tau * k2);
    state.u2.coeff = 0.75 * u2 + 0.25 * (state.u2.coeff + tau * l2);
    auto [k3, l3] = semidiscrete_rhs(state, t + 0.5 * tau, ops);
    state.u1.coeff = u1 / 3.0 + 2.0 / 3.0 * (state.u1.coeff + tau * k3);
    state.u2.coeff = u2 / 3.0 + 2.0 / 3.0 * (state.u2.coeff + tau * l3);
  }
  state.t = t + tau;
  state.u1.time_stamp = state.u2.time_stamp = state.t;
  if (!state.u1.coeff.allFinite() || !state.u2.coeff.allFinite())
    throw StabilityViolation(state.t, step_index);
  state.energy_trace.emplace_back(state.t, energy(state));
}

// One-step dense propagator for time-invariant 1D systems: a single RK3
// step is a cubic polynomial in tau*L, so stepping reduces to one
// matrix-vector product plus a three-term source combination.
struct DensePropagator {
  Eigen::MatrixXd phi;
  Eigen::VectorXd a0, a1, a2;  // F, (I+S)F, (I+S)^2 F
  int n1 = 0;

  static DensePropagator build(const Operators& ops, double tau) {
    const int n1 = dofs_per_line(ops.mesh.primal, ops.basis);
    const int n2 = dofs_per_line(ops.mesh.dual, ops.basis);
    const int n = n1 + n2;
    Eigen::MatrixXd S(n, n);
    Eigen::VectorXd unit1 = Eigen::VectorXd::Zero(n1);
    Eigen::VectorXd unit2 = Eigen::VectorXd::Zero(n2);
    for (int j = 0; j < n; ++j) {
      if (j < n1) unit1[j] = 1.0; else unit2[j - n1] = 1.0;
      auto [d1, d2] = semidiscrete_rhs_linear(unit1, unit2, ops);
      S.block(0, j, n1, 1) = tau * d1;
      S.block(n1, j, n2, 1) = tau * d2;
      if (j < n1) unit1[j] = 0.0; else unit2[j - n1] = 0.0;
    }
    DensePropagator p;
    p.n1 = n1;
    Eigen::MatrixXd ips = S + Eigen::MatrixXd::Identity(n, n);
    p.phi = Eigen::MatrixXd::Identity(n, n) / 3.0 + 0.5 * ips +
            (ips * ips * ips) / 6.0;
    Eigen::VectorXd f(n);
    f.head(n1) = ops.load_profile_p.col(0);
    f.tail(n2) = ops.load_profile_d.col(0);
    p.a0 = f;
    p.a1 = ips * f;
    p.a2 = ips * p.a1;
    return p;
  }
};

}  // namespace

SolverState step(SolverState state, const TimeControls& controls,
                 const Operators& ops) {
  controls.validate();
  if (controls.tau_max != ops.tau_max)
    throw std::invalid_argument("step: controls.tau_max differs from the assembled relaxation scale");
  advance(state, controls.tau, controls, ops,
          static_cast<long>(state.energy_trace.size()));
  return state;
}

SolverState run(const ProblemSpec& problem, const OverlappingMesh& mesh,
                const BasisSpec& basis, const TimeControls& controls) {
  controls.validate();
  problem.validate();
  Operators ops = build_operators(problem, mesh, basis, controls.tau_max);

  SolverState state;
  if (mesh.dimension == 1) {
    auto g1 = [&](double x) { return problem.g(x, 0.0); };
    state.u1 = l2_project(std::function<double(double)>(g1), MeshTag::primal,
                          mesh, basis);
    state.u2 = l2_project(std::function<double(double)>(g1), MeshTag::dual,
                          mesh, basis);
  } else {
    state.u1 = l2_project(problem.g, MeshTag::primal, mesh, basis);
    state.u2 = l2_project(problem.g, MeshTag::dual, mesh, basis);
  }
  state.t = 0.0;
  state.energy_trace.emplace_back(0.0, energy(state));

  const double tau = controls.tau;
  const long full_steps = static_cast<long>(std::floor(problem.T / tau + 1e-12));

  const bool fast_path = (mesh.dimension == 1) && ops.separable_source &&
                         controls.integrator == Integrator::ssp_rk3 &&
                         controls.allow_dense_fast_path;
  if (fast_path && full_steps > 0) {
    const DensePropagator prop = DensePropagator::build(ops, tau);
    const int n1 = prop.n1;
    Eigen::VectorXd u(prop.phi.rows());
    u.head(n1) = state.u1.coeff.col(0);
    u.tail(u.size() - n1) = state.u2.coeff.col(0);
    for (long s = 0; s < full_steps; ++s) {
      const double t = s * tau;
      const double f1 = ops.time_factor(t);
      const double f2 = ops.time_factor(t + tau);
      const double f3 = ops.time_factor(t + 0.5 * tau);
      u = prop.phi * u +
          (tau / 6.0) * (f1 * prop.a2 + f2 * prop.a1 + 4.0 * f3 * prop.a0);
      if (!u.allFinite()) throw StabilityViolation((s + 1) * tau, s);
      state.energy_trace.emplace_back((s + 1) * tau, u.squaredNorm());
    }
    state.u1.coeff.col(0) = u.head(n1);
    state.u2.coeff.col(0) = u.tail(u.size() - n1);
    state.t = full_steps * tau;
    state.u1.time_stamp = state.u2.time_stamp = state.t;
  } else {
    for (long s = 0; s < full_steps; ++s)
      advance(state, tau, controls, ops, s);
  }
  const double remainder = problem.T - state.t;
  if (remainder > 1e-12 * problem.T)
    advance(state, remainder, controls, ops, full_steps);
  state.t = problem.T;
  state.u1.time_stamp = state.u2.time_stamp = problem.T;
  return state;
}

}  // namespace cldg
