#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <iosfwd>
#include <string>

#include "cldg/frac_kernels.hpp"
#include "cldg/mesh.hpp"

namespace cldg {

/// Which factor carries the left-sided derivative in the Gram pairing.
/// left_trial: entry (i,j) = (D_L^s b_j, D_R^s b_i); right_trial is the
/// mirrored pairing and equals the transpose of the left variant.
enum class PairingVariant { left_trial, right_trial };

/// Dense matrix of half-order derivative pairings over one mesh line's
/// basis, with a cached LU factorization. The pairing couples a cell pair
/// only when the trial support starts before the test support ends, so the
/// matrix is block triangular; its symmetric part is positive definite for
/// s in (0,1/2).
struct FractionalGram {
  MeshTag tag = MeshTag::primal;
  int direction = 0;  // 0 = x, 1 = y
  double s = 0.25;
  int k = 1;
  Eigen::MatrixXd matrix;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu;

  Eigen::MatrixXd solve(const Eigen::MatrixXd& rhs) const { return lu.solve(rhs); }
  Eigen::MatrixXd solve_transposed(const Eigen::MatrixXd& rhs) const {
    return lu.transpose().solve(rhs);
  }
};

FractionalGram assemble_gram(const OverlappingMesh& mesh, MeshTag tag,
                             const BasisSpec& basis, const FractionalExponent& s,
                             int direction = 0,
                             PairingVariant variant = PairingVariant::left_trial,
                             bool use_translation = true);

/// Trace convention at the two domain-boundary points. Fields that carry
/// the solution u are zero-extended outside the domain, so their boundary
/// trace vanishes; auxiliary-flux fields use the one-sided interior value.
enum class BoundaryTrace { zero_exterior, interior };

/// Weak-derivative coupling between the two meshes: realizes
///   u |-> -(u, phi')_cell + (u, n phi)_dcell
/// for every to-mesh cell-supported test phi, with u living on the from
/// mesh. Interface traces of u are single-valued because every interior
/// to-cell endpoint is interior to a from-cell.
struct CouplingOperator {
  MeshTag from = MeshTag::primal;
  MeshTag to = MeshTag::dual;
  BoundaryTrace trace = BoundaryTrace::zero_exterior;
  Eigen::SparseMatrix<double> matrix;  // to-dofs by from-dofs
};

CouplingOperator assemble_coupling(const OverlappingMesh& mesh, MeshTag from,
                                   MeshTag to, const BasisSpec& basis,
                                   BoundaryTrace trace);

/// Cross-mesh mass pairings (b_from, b_to) over cell intersections.
struct OverlapMass {
  MeshTag from = MeshTag::primal;
  MeshTag to = MeshTag::dual;
  Eigen::SparseMatrix<double> matrix;
};

OverlapMass assemble_overlap_mass(const OverlappingMesh& mesh, MeshTag from,
                                  MeshTag to, const BasisSpec& basis);

/// Solution of G q = rhs using the cached factorization.
Eigen::VectorXd solve_aux(const FractionalGram& gram, const Eigen::VectorXd& rhs);

/// Solves (G_x (x) I_y) vec(q) = vec(rhs) for a 2D coefficient block whose
/// rows are x-dofs: independent 1D solves along every y-line. The identity
/// mass factor is exact for the orthonormal basis.
Eigen::MatrixXd solve_aux_2d(const FractionalGram& gram_x,
                             const Eigen::MatrixXd& rhs);

/// Debug dump (text, row-major) with a small header; readable by
/// load_matrix_dump.
void dump_matrix(std::ostream& os, const FractionalGram& gram, int n_cells);
void dump_matrix(const std::string& path, const FractionalGram& gram, int n_cells);
Eigen::MatrixXd load_matrix_dump(std::istream& is);

}  // namespace cldg
