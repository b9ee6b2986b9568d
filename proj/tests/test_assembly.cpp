#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>
#include <sstream>

#include "cldg/assembly.hpp"
#include "cldg/mesh.hpp"
#include "cldg/quadrature.hpp"
#include "oracles.hpp"

using namespace cldg;

TEST_CASE("gram approaches the identity as s -> 0") {
  const OverlappingMesh mesh = build_mesh(1, 2);
  const BasisSpec basis{0};
  for (MeshTag tag : {MeshTag::primal, MeshTag::dual}) {
    double prev = 1e9;
    for (double sv : {1e-2, 1e-3, 1e-4}) {
      const auto gram = assemble_gram(mesh, tag, basis,
                                      FractionalExponent::gram_order(sv));
      const Eigen::MatrixXd dev =
          gram.matrix - Eigen::MatrixXd::Identity(gram.matrix.rows(),
                                                  gram.matrix.cols());
      const double err = dev.cwiseAbs().maxCoeff();
      CHECK(err < prev);
      prev = err;
    }
    CHECK(prev < 5e-3);
  }
}

TEST_CASE("gram pairing is block triangular in the support order") {
  const OverlappingMesh mesh = build_mesh(1, 5);
  const BasisSpec basis{1};
  const auto s = FractionalExponent::gram_order(0.3);
  const auto gram = assemble_gram(mesh, MeshTag::dual, basis, s);
  const MeshLine& line = mesh.dual;
  const int nm = basis.modes();
  for (int i = 0; i < line.cells(); ++i)
    for (int j = 0; j < line.cells(); ++j) {
      if (line.left(j) < line.right(i)) continue;
      for (int l = 0; l < nm; ++l)
        for (int m = 0; m < nm; ++m)
          CHECK(gram.matrix(i * nm + l, j * nm + m) == 0.0);
    }
}

TEST_CASE("gram coercivity on random vectors") {
  const OverlappingMesh mesh = build_mesh(1, 6);
  const BasisSpec basis{1};
  const auto gram = assemble_gram(mesh, MeshTag::dual, basis,
                                  FractionalExponent::gram_order(0.4));
  std::mt19937 rng(42);
  std::normal_distribution<double> gauss;
  for (int trial = 0; trial < 100; ++trial) {
    Eigen::VectorXd x(gram.matrix.rows());
    for (int i = 0; i < x.size(); ++i) x[i] = gauss(rng);
    CHECK(x.dot(gram.matrix * x) > 0.0);
  }
}

TEST_CASE("symmetric part is positive definite across s, N, k") {
  for (double sv : {0.05, 0.25, 0.45}) {
    for (int n : {2, 4}) {
      for (int k : {0, 1, 2}) {
        const OverlappingMesh mesh = build_mesh(1, n);
        const BasisSpec basis{k};
        for (MeshTag tag : {MeshTag::primal, MeshTag::dual}) {
          const auto gram = assemble_gram(mesh, tag, basis,
                                          FractionalExponent::gram_order(sv));
          const Eigen::MatrixXd sym =
              0.5 * (gram.matrix + gram.matrix.transpose());
          Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
          CHECK(es.eigenvalues().minCoeff() > 0.0);
        }
      }
    }
  }
}

TEST_CASE("left and right pairing variants are transposes") {
  const OverlappingMesh mesh = build_mesh(1, 4);
  const BasisSpec basis{1};
  const auto s = FractionalExponent::gram_order(0.35);
  const auto gl = assemble_gram(mesh, MeshTag::dual, basis, s, 0,
                                PairingVariant::left_trial);
  const auto gr = assemble_gram(mesh, MeshTag::dual, basis, s, 0,
                                PairingVariant::right_trial);
  CHECK((gl.matrix - gr.matrix.transpose()).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("translation shortcut matches direct assembly") {
  const OverlappingMesh mesh = build_mesh(1, 6);
  const BasisSpec basis{2};
  const auto s = FractionalExponent::gram_order(0.25);
  for (MeshTag tag : {MeshTag::primal, MeshTag::dual}) {
    const auto fast = assemble_gram(mesh, tag, basis, s, 0,
                                    PairingVariant::left_trial, true);
    const auto slow = assemble_gram(mesh, tag, basis, s, 0,
                                    PairingVariant::left_trial, false);
    CHECK((fast.matrix - slow.matrix).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("gram realizes the adjoint transfer of the whole-order pairing") {
  // for u in the discrete space with zero boundary values,
  // (D_L^s u, D_R^s v) equals (D^{2s} u, v) computed by direct quadrature
  const OverlappingMesh mesh = build_mesh(1, 4);
  const BasisSpec basis{4};
  const double sv = 0.3;
  const auto gram = assemble_gram(mesh, MeshTag::primal, basis,
                                  FractionalExponent::gram_order(sv));
  auto u = [](double x) { return x * x * (1.0 - x) * (1.0 - x); };
  auto du = [](double x) { return 2.0 * x * (1.0 - x) * (1.0 - 2.0 * x); };
  const DGField uh = l2_project(std::function<double(double)>(u),
                                MeshTag::primal, mesh, basis);

  std::mt19937 rng(3);
  std::uniform_real_distribution<double> c(-1.0, 1.0);
  Eigen::VectorXd v = Eigen::VectorXd::Zero(gram.matrix.rows());
  const int cell = 2;
  for (int m = 0; m <= basis.k; ++m) v[cell * basis.modes() + m] = c(rng);

  const double via_gram = v.dot(gram.matrix * uh.coeff.col(0));

  const MeshLine& line = mesh.primal;
  const QuadRule& rule = gauss_legendre(20);
  const double a = line.left(cell), w = line.width(cell);
  double direct = 0.0;
  for (int q = 0; q < rule.nodes.size(); ++q) {
    const double x = a + w * rule.nodes[q];
    double vv = 0.0;
    for (int m = 0; m <= basis.k; ++m)
      vv += v[cell * basis.modes() + m] * basis_value(m, a, a + w, x);
    direct += w * rule.weights[q] *
              oracle::frac_deriv(u, du, 2.0 * sv, 0.0, x, 32) * vv;
  }
  CHECK(via_gram == doctest::Approx(direct).epsilon(1e-6));
}

TEST_CASE("coupling annihilates constants on interior cells") {
  const OverlappingMesh mesh = build_mesh(1, 6);
  const BasisSpec basis{2};
  const auto op = assemble_coupling(mesh, MeshTag::primal, MeshTag::dual, basis,
                                    BoundaryTrace::zero_exterior);
  Eigen::VectorXd ones(mesh.primal.cells() * basis.modes());
  ones.setZero();
  for (int j = 0; j < mesh.primal.cells(); ++j)
    ones[j * basis.modes()] = std::sqrt(mesh.primal.width(j));
  const Eigen::VectorXd out = op.matrix * ones;
  double interior = 0.0, boundary = 0.0;
  for (int i = 0; i < mesh.dual.cells(); ++i)
    for (int m = 0; m <= basis.k; ++m) {
      const double v = std::abs(out[i * basis.modes() + m]);
      if (i == 0 || i == mesh.dual.cells() - 1)
        boundary = std::max(boundary, v);
      else
        interior = std::max(interior, v);
    }
  CHECK(interior < 1e-12);
  CHECK(boundary > 0.1);  // domain-boundary rows keep the one-sided trace

  CHECK((op.matrix * Eigen::VectorXd::Zero(ones.size())).norm() == 0.0);
}

TEST_CASE("coupling bandedness") {
  const OverlappingMesh mesh = build_mesh(1, 8);
  const BasisSpec basis{1};
  const auto op = assemble_coupling(mesh, MeshTag::primal, MeshTag::dual, basis,
                                    BoundaryTrace::interior);
  const Eigen::MatrixXd dense = Eigen::MatrixXd(op.matrix);
  const int nm = basis.modes();
  for (int i = 0; i < mesh.dual.cells(); ++i) {
    const double L = mesh.dual.left(i), R = mesh.dual.right(i);
    for (int j = 0; j < mesh.primal.cells(); ++j) {
      const bool overlaps =
          mesh.primal.right(j) >= L - 1e-14 && mesh.primal.left(j) <= R + 1e-14;
      if (overlaps) continue;
      for (int l = 0; l < nm; ++l)
        for (int m = 0; m < nm; ++m)
          CHECK(dense(i * nm + l, j * nm + m) == 0.0);
    }
  }
}

TEST_CASE("coupling is consistent on continuous fields") {
  const OverlappingMesh mesh = build_mesh(1, 5);
  const BasisSpec basis{2};
  auto u = [](double x) { return x * (1.0 - x); };
  auto du = [](double x) { return 1.0 - 2.0 * x; };
  const DGField uh = l2_project(std::function<double(double)>(u),
                                MeshTag::primal, mesh, basis);
  const auto op = assemble_coupling(mesh, MeshTag::primal, MeshTag::dual, basis,
                                    BoundaryTrace::zero_exterior);
  const Eigen::VectorXd got = op.matrix * uh.coeff.col(0);

  const QuadRule& rule = gauss_legendre(8);
  for (int i = 0; i < mesh.dual.cells(); ++i) {
    const double a = mesh.dual.left(i), w = mesh.dual.width(i);
    for (int m = 0; m <= basis.k; ++m) {
      double want = 0.0;
      for (int q = 0; q < rule.nodes.size(); ++q) {
        const double x = a + w * rule.nodes[q];
        want += w * rule.weights[q] * du(x) * basis_value(m, a, a + w, x);
      }
      CHECK(got[i * basis.modes() + m] == doctest::Approx(want).epsilon(1e-10));
    }
  }
}

TEST_CASE("flux and solution couplings are negative adjoints") {
  const OverlappingMesh mesh = build_mesh(1, 7);
  const BasisSpec basis{2};
  const auto cu_dp = assemble_coupling(mesh, MeshTag::primal, MeshTag::dual,
                                       basis, BoundaryTrace::zero_exterior);
  const auto cq_pd = assemble_coupling(mesh, MeshTag::dual, MeshTag::primal,
                                       basis, BoundaryTrace::interior);
  const Eigen::MatrixXd lhs = Eigen::MatrixXd(cq_pd.matrix);
  const Eigen::MatrixXd rhs = -Eigen::MatrixXd(cu_dp.matrix).transpose();
  CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12);

  const auto cu_pd = assemble_coupling(mesh, MeshTag::dual, MeshTag::primal,
                                       basis, BoundaryTrace::zero_exterior);
  const auto cq_dp = assemble_coupling(mesh, MeshTag::primal, MeshTag::dual,
                                       basis, BoundaryTrace::interior);
  const Eigen::MatrixXd lhs2 = Eigen::MatrixXd(cq_dp.matrix);
  const Eigen::MatrixXd rhs2 = -Eigen::MatrixXd(cu_pd.matrix).transpose();
  CHECK((lhs2 - rhs2).cwiseAbs().maxCoeff() < 1e-12);

  CHECK_THROWS_AS(assemble_coupling(mesh, MeshTag::dual, MeshTag::dual, basis,
                                    BoundaryTrace::interior),
                  std::invalid_argument);
}

TEST_CASE("overlap mass: constants, transpose, bandedness") {
  const OverlappingMesh mesh = build_mesh(1, 6);
  const BasisSpec basis{1};
  const auto m_dp = assemble_overlap_mass(mesh, MeshTag::primal, MeshTag::dual, basis);
  const auto m_pd = assemble_overlap_mass(mesh, MeshTag::dual, MeshTag::primal, basis);
  CHECK((Eigen::MatrixXd(m_dp.matrix) - Eigen::MatrixXd(m_pd.matrix).transpose())
            .cwiseAbs()
            .maxCoeff() < 1e-12);

  Eigen::VectorXd ones(mesh.primal.cells() * basis.modes());
  ones.setZero();
  for (int j = 0; j < mesh.primal.cells(); ++j)
    ones[j * basis.modes()] = std::sqrt(mesh.primal.width(j));
  const Eigen::VectorXd out = m_dp.matrix * ones;
  for (int i = 0; i < mesh.dual.cells(); ++i) {
    CHECK(out[i * basis.modes()] * std::sqrt(mesh.dual.width(i)) ==
          doctest::Approx(mesh.dual.width(i)).epsilon(1e-12));
    CHECK(std::abs(out[i * basis.modes() + 1]) < 1e-13);
  }
}

TEST_CASE("solve_aux recovers known solutions within the residual bound") {
  const OverlappingMesh mesh = build_mesh(1, 5);
  const BasisSpec basis{1};
  const auto gram = assemble_gram(mesh, MeshTag::dual, basis,
                                  FractionalExponent::gram_order(0.25));
  CHECK(solve_aux(gram, Eigen::VectorXd::Zero(gram.matrix.rows())).norm() == 0.0);

  std::mt19937 rng(9);
  std::normal_distribution<double> gauss;
  Eigen::VectorXd q_star(gram.matrix.rows());
  for (int i = 0; i < q_star.size(); ++i) q_star[i] = gauss(rng);
  const Eigen::VectorXd rhs = gram.matrix * q_star;
  const Eigen::VectorXd q = solve_aux(gram, rhs);
  CHECK((q - q_star).norm() < 1e-9 * q_star.norm());
  CHECK((gram.matrix * q - rhs).norm() <= 1e-10 * (1.0 + rhs.norm()));
}

TEST_CASE("2D line solves match the explicit Kronecker system") {
  const OverlappingMesh mesh = build_mesh(2, 3);
  const BasisSpec basis{1};
  const auto gram = assemble_gram(mesh, MeshTag::dual, basis,
                                  FractionalExponent::gram_order(0.2));
  const int nx = gram.matrix.rows();
  const int ny = nx;
  std::mt19937 rng(17);
  std::normal_distribution<double> gauss;
  Eigen::MatrixXd rhs(nx, ny);
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < ny; ++j) rhs(i, j) = gauss(rng);

  const Eigen::MatrixXd q = solve_aux_2d(gram, rhs);

  // kron(I_y, G_x) vec(Q) = vec(RHS) in column-major layout
  Eigen::MatrixXd big = Eigen::MatrixXd::Zero(nx * ny, nx * ny);
  for (int j = 0; j < ny; ++j)
    big.block(j * nx, j * nx, nx, nx) = gram.matrix;
  const Eigen::VectorXd vec_rhs =
      Eigen::Map<const Eigen::VectorXd>(rhs.data(), nx * ny);
  const Eigen::VectorXd vec_q = big.partialPivLu().solve(vec_rhs);
  const Eigen::MatrixXd q_ref =
      Eigen::Map<const Eigen::MatrixXd>(vec_q.data(), nx, ny);
  CHECK((q - q_ref).cwiseAbs().maxCoeff() < 1e-9);

  // separable right-hand side: q = (G^-1 rx) ry^T
  Eigen::VectorXd rx(nx), ry(ny);
  for (int i = 0; i < nx; ++i) rx[i] = gauss(rng);
  for (int j = 0; j < ny; ++j) ry[j] = gauss(rng);
  const Eigen::MatrixXd qs = solve_aux_2d(gram, rx * ry.transpose());
  const Eigen::MatrixXd want = solve_aux(gram, rx) * ry.transpose();
  CHECK((qs - want).cwiseAbs().maxCoeff() < 1e-10);

  CHECK(solve_aux_2d(gram, Eigen::MatrixXd::Zero(nx, ny)).norm() == 0.0);
}

TEST_CASE("matrix dump round-trips") {
  const OverlappingMesh mesh = build_mesh(1, 3);
  const BasisSpec basis{1};
  const auto gram = assemble_gram(mesh, MeshTag::primal, basis,
                                  FractionalExponent::gram_order(0.45));
  std::stringstream ss;
  dump_matrix(ss, gram, 3);
  const Eigen::MatrixXd back = load_matrix_dump(ss);
  CHECK((back - gram.matrix).cwiseAbs().maxCoeff() < 1e-15);
}
