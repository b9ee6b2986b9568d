#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "cldg/frac_kernels.hpp"

namespace cldg {

enum class MeshTag { primal, dual };

/// One direction of an overlapping pair: the primal partition has N cells of
/// width h = 1/N; the dual partition is staggered by h/2 with half-width
/// cells at both domain boundaries, N+1 cells total.
struct MeshLine {
  std::vector<double> edges;  // cell boundaries, ascending, edges[0]=0, back()=1

  int cells() const { return static_cast<int>(edges.size()) - 1; }
  double left(int i) const { return edges[i]; }
  double right(int i) const { return edges[i + 1]; }
  double width(int i) const { return edges[i + 1] - edges[i]; }
  /// Index of the cell containing x under the half-open convention
  /// [edges[i], edges[i+1]); x == 1 belongs to the last cell.
  int locate(double x) const;
};

struct OverlappingMesh {
  int dimension = 1;  // 1 or 2; 2D cells are tensor products per direction
  int n = 0;          // primal cells per direction
  double h = 0.0;
  MeshLine primal;
  MeshLine dual;

  const MeshLine& line(MeshTag tag) const {
    return tag == MeshTag::primal ? primal : dual;
  }
};

OverlappingMesh build_mesh(int dimension, int n);

/// Modal basis of degree k: orthonormal Legendre per cell, tensor products
/// in 2D. All per-cell mass matrices are identities by construction.
struct BasisSpec {
  int k = 1;
  int modes() const { return k + 1; }
};

/// Value of the orthonormal Legendre mode on [a,b] at x.
double basis_value(int mode, double a, double b, double x);
/// Its first derivative at x.
double basis_derivative(int mode, double a, double b, double x);

/// Piecewise-polynomial field on one mesh of the pair. Coefficients are a
/// matrix of x-dofs by y-dofs; in 1D there is a single column. The dof
/// index within a direction is cell * (k+1) + mode.
struct DGField {
  MeshTag tag = MeshTag::primal;
  int dimension = 1;
  int k = 1;
  Eigen::MatrixXd coeff;
  double time_stamp = 0.0;
};

inline int dofs_per_line(const MeshLine& line, const BasisSpec& basis) {
  return line.cells() * basis.modes();
}

DGField zero_field(const OverlappingMesh& mesh, MeshTag tag, const BasisSpec& basis);

/// Cellwise L2 orthogonal projection; quadrature uses k+3 Gauss-Legendre
/// points per direction.
DGField l2_project(const std::function<double(double)>& f,
                   MeshTag tag, const OverlappingMesh& mesh, const BasisSpec& basis);
DGField l2_project(const std::function<double(double, double)>& f,
                   MeshTag tag, const OverlappingMesh& mesh, const BasisSpec& basis);

/// Projection of a single direction onto a mesh line (used to assemble
/// separable data exactly); returns the coefficient vector.
Eigen::VectorXd l2_project_line(const std::function<double(double)>& f,
                                const MeshLine& line, const BasisSpec& basis,
                                int quad_points);

double evaluate_field(const DGField& field, const OverlappingMesh& mesh,
                      double x);
double evaluate_field(const DGField& field, const OverlappingMesh& mesh,
                      double x, double y);

double l2_error(const DGField& field, const OverlappingMesh& mesh,
                const std::function<double(double)>& exact);
double l2_error(const DGField& field, const OverlappingMesh& mesh,
                const std::function<double(double, double)>& exact);

/// Squared L2 norm; equals the squared coefficient sum for this basis.
inline double squared_norm(const DGField& field) { return field.coeff.squaredNorm(); }

}  // namespace cldg
