#include "cldg/mesh.hpp"

#include <cmath>
#include <stdexcept>

#include "cldg/quadrature.hpp"

namespace cldg {

int MeshLine::locate(double x) const {
  if (x < edges.front() || x > edges.back())
    throw std::domain_error("point outside domain");
  if (x >= edges[edges.size() - 2]) return cells() - 1;
  int lo = 0, hi = cells() - 1;
  while (lo < hi) {
    int mid = (lo + hi) / 2;
    if (x < edges[mid + 1])
      hi = mid;
    else
      lo = mid + 1;
  }
  return lo;
}

OverlappingMesh build_mesh(int dimension, int n) {
  if (dimension != 1 && dimension != 2)
    throw std::invalid_argument("build_mesh: dimension must be 1 or 2");
  if (n < 2) throw std::invalid_argument("build_mesh: N must be >= 2");
  OverlappingMesh mesh;
  mesh.dimension = dimension;
  mesh.n = n;
  mesh.h = 1.0 / n;
  mesh.primal.edges.resize(n + 1);
  for (int i = 0; i <= n; ++i) mesh.primal.edges[i] = static_cast<double>(i) / n;
  mesh.primal.edges.back() = 1.0;
  // dual edges: 0, h/2, 3h/2, ..., 1 (boundary cells of width h/2)
  mesh.dual.edges.resize(n + 2);
  mesh.dual.edges[0] = 0.0;
  for (int i = 1; i <= n; ++i)
    mesh.dual.edges[i] = (i - 0.5) / n;
  mesh.dual.edges[n + 1] = 1.0;
  return mesh;
}

double basis_value(int mode, double a, double b, double x) {
  CellPolynomial p;
  p.a = a;
  p.b = b;
  p.modal.assign(mode + 1, 0.0);
  p.modal[mode] = 1.0;
  return p.extension(x);
}

double basis_derivative(int mode, double a, double b, double x) {
  // d/dx P_m(u(x)) with u = 2(x-a)/w - 1, via the bound-derivative recurrence
  const double w = b - a;
  const double u = 2.0 * (x - a) / w - 1.0;
  double p0 = 1.0, p1 = u, d0 = 0.0, d1 = 1.0;
  if (mode == 0) return 0.0;
  for (int j = 2; j <= mode; ++j) {
    const double p2 = ((2.0 * j - 1.0) * u * p1 - (j - 1.0) * p0) / j;
    const double d2 = ((2.0 * j - 1.0) * (p1 + u * d1) - (j - 1.0) * d0) / j;
    p0 = p1; p1 = p2; d0 = d1; d1 = d2;
  }
  return std::sqrt((2.0 * mode + 1.0) / w) * d1 * 2.0 / w;
}

DGField zero_field(const OverlappingMesh& mesh, MeshTag tag, const BasisSpec& basis) {
  DGField f;
  f.tag = tag;
  f.dimension = mesh.dimension;
  f.k = basis.k;
  const int nx = dofs_per_line(mesh.line(tag), basis);
  const int ny = (mesh.dimension == 2) ? nx : 1;
  f.coeff = Eigen::MatrixXd::Zero(nx, ny);
  return f;
}

Eigen::VectorXd l2_project_line(const std::function<double(double)>& f,
                                const MeshLine& line, const BasisSpec& basis,
                                int quad_points) {
  const QuadRule& rule = gauss_legendre(quad_points);
  Eigen::VectorXd c = Eigen::VectorXd::Zero(dofs_per_line(line, basis));
  for (int i = 0; i < line.cells(); ++i) {
    const double a = line.left(i), w = line.width(i);
    for (int q = 0; q < quad_points; ++q) {
      const double x = a + w * rule.nodes[q];
      const double wf = w * rule.weights[q] * f(x);
      for (int m = 0; m <= basis.k; ++m)
        c[i * basis.modes() + m] += wf * basis_value(m, a, a + w, x);
    }
  }
  return c;
}

DGField l2_project(const std::function<double(double)>& f,
                   MeshTag tag, const OverlappingMesh& mesh, const BasisSpec& basis) {
  if (mesh.dimension != 1)
    throw std::invalid_argument("l2_project: 1D overload on a 2D mesh");
  DGField out = zero_field(mesh, tag, basis);
  out.coeff.col(0) = l2_project_line(f, mesh.line(tag), basis, basis.k + 3);
  return out;
}

DGField l2_project(const std::function<double(double, double)>& f,
                   MeshTag tag, const OverlappingMesh& mesh, const BasisSpec& basis) {
  if (mesh.dimension != 2)
    throw std::invalid_argument("l2_project: 2D overload on a 1D mesh");
  const MeshLine& line = mesh.line(tag);
  const int q = basis.k + 3;
  const QuadRule& rule = gauss_legendre(q);
  DGField out = zero_field(mesh, tag, basis);
  const int nm = basis.modes();
  std::vector<double> bx(q * nm), by(q * nm);
  for (int ci = 0; ci < line.cells(); ++ci) {
    const double ax = line.left(ci), wx = line.width(ci);
    for (int qi = 0; qi < q; ++qi)
      for (int m = 0; m < nm; ++m)
        bx[qi * nm + m] = basis_value(m, ax, ax + wx, ax + wx * rule.nodes[qi]);
    for (int cj = 0; cj < line.cells(); ++cj) {
      const double ay = line.left(cj), wy = line.width(cj);
      for (int qj = 0; qj < q; ++qj)
        for (int m = 0; m < nm; ++m)
          by[qj * nm + m] = basis_value(m, ay, ay + wy, ay + wy * rule.nodes[qj]);
      for (int qi = 0; qi < q; ++qi) {
        const double x = ax + wx * rule.nodes[qi];
        for (int qj = 0; qj < q; ++qj) {
          const double y = ay + wy * rule.nodes[qj];
          const double wf = wx * wy * rule.weights[qi] * rule.weights[qj] * f(x, y);
          for (int mi = 0; mi < nm; ++mi)
            for (int mj = 0; mj < nm; ++mj)
              out.coeff(ci * nm + mi, cj * nm + mj) +=
                  wf * bx[qi * nm + mi] * by[qj * nm + mj];
        }
      }
    }
  }
  return out;
}

double evaluate_field(const DGField& field, const OverlappingMesh& mesh, double x) {
  const MeshLine& line = mesh.line(field.tag);
  const int i = line.locate(x);
  const int nm = field.k + 1;
  double v = 0.0;
  for (int m = 0; m < nm; ++m)
    v += field.coeff(i * nm + m, 0) * basis_value(m, line.left(i), line.right(i), x);
  return v;
}

double evaluate_field(const DGField& field, const OverlappingMesh& mesh,
                      double x, double y) {
  const MeshLine& line = mesh.line(field.tag);
  const int i = line.locate(x), j = line.locate(y);
  const int nm = field.k + 1;
  double v = 0.0;
  for (int mi = 0; mi < nm; ++mi) {
    const double bx = basis_value(mi, line.left(i), line.right(i), x);
    for (int mj = 0; mj < nm; ++mj)
      v += field.coeff(i * nm + mi, j * nm + mj) * bx *
           basis_value(mj, line.left(j), line.right(j), y);
  }
  return v;
}

double l2_error(const DGField& field, const OverlappingMesh& mesh,
                const std::function<double(double)>& exact) {
  const MeshLine& line = mesh.line(field.tag);
  const int q = field.k + 3;
  const QuadRule& rule = gauss_legendre(q);
  const int nm = field.k + 1;
  double acc = 0.0;
  for (int i = 0; i < line.cells(); ++i) {
    const double a = line.left(i), w = line.width(i);
    for (int qi = 0; qi < q; ++qi) {
      const double x = a + w * rule.nodes[qi];
      double v = 0.0;
      for (int m = 0; m < nm; ++m)
        v += field.coeff(i * nm + m, 0) * basis_value(m, a, a + w, x);
      const double d = exact(x) - v;
      acc += w * rule.weights[qi] * d * d;
    }
  }
  return std::sqrt(acc);
}

double l2_error(const DGField& field, const OverlappingMesh& mesh,
                const std::function<double(double, double)>& exact) {
  const MeshLine& line = mesh.line(field.tag);
  const int q = field.k + 3;
  const QuadRule& rule = gauss_legendre(q);
  const int nm = field.k + 1;
  double acc = 0.0;
  for (int ci = 0; ci < line.cells(); ++ci) {
    const double ax = line.left(ci), wx = line.width(ci);
    for (int cj = 0; cj < line.cells(); ++cj) {
      const double ay = line.left(cj), wy = line.width(cj);
      for (int qi = 0; qi < q; ++qi) {
        const double x = ax + wx * rule.nodes[qi];
        for (int qj = 0; qj < q; ++qj) {
          const double y = ay + wy * rule.nodes[qj];
          double v = 0.0;
          for (int mi = 0; mi < nm; ++mi) {
            const double bx = basis_value(mi, ax, ax + wx, x);
            for (int mj = 0; mj < nm; ++mj)
              v += field.coeff(ci * nm + mi, cj * nm + mj) * bx *
                   basis_value(mj, ay, ay + wy, y);
          }
          const double d = exact(x, y) - v;
          acc += wx * wy * rule.weights[qi] * rule.weights[qj] * d * d;
        }
      }
    }
  }
  return std::sqrt(acc);
}

}  // namespace cldg
