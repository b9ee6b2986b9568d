#include "cldg/assembly.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "cldg/quadrature.hpp"

namespace cldg {

namespace {

constexpr int kGramQuadPoints = 14;

CellPolynomial basis_poly(double a, double b, int mode, int k) {
  CellPolynomial p;
  p.a = a;
  p.b = b;
  p.modal.assign(k + 1, 0.0);
  p.modal[mode] = 1.0;
  return p;
}

// Per-mode power series of a one-sided derivative, grouped by origin.
struct SeriesBundle {
  double origin;
  std::vector<std::vector<double>> coeff;  // [mode][power]
};

struct SideTerms {
  Side side;
  double s;
  std::vector<SeriesBundle> bundles;  // one per support endpoint
};

SideTerms side_terms(double a, double b, int k, double s, Side side) {
  SideTerms out;
  out.side = side;
  out.s = s;
  FractionalExponent fs = FractionalExponent::unit_interval(s);
  for (int m = 0; m <= k; ++m) {
    CellPolynomial p = basis_poly(a, b, m, k);
    FracDerivTerms t = (side == Side::left) ? left_frac_deriv_terms(p, fs)
                                            : right_frac_deriv_terms(p, fs);
    for (size_t g = 0; g < t.series.size(); ++g) {
      if (out.bundles.size() <= g)
        out.bundles.push_back({t.series[g].origin, {}});
      out.bundles[g].coeff.push_back(t.series[g].coeff);
    }
  }
  return out;
}

double horner(const std::vector<double>& c, double u) {
  double v = 0.0;
  for (int r = static_cast<int>(c.size()) - 1; r >= 0; --r) v = v * u + c[r];
  return v;
}

// Geometrically graded breakpoints of [p1,p2], segment lengths growing away
// from both ends starting at `base`; keeps every segment at least its own
// length away from the endpoints' singularities.
std::vector<double> graded_breakpoints(double p1, double p2, double base) {
  const double len = p2 - p1;
  std::vector<double> pts;
  pts.push_back(p1);
  std::vector<double> right;
  for (double off = base; off < 0.5 * len; off *= 2.0) {
    pts.push_back(p1 + off);
    right.push_back(p2 - off);
  }
  for (auto it = right.rbegin(); it != right.rend(); ++it) pts.push_back(*it);
  pts.push_back(p2);
  return pts;
}

// Block of pairings B(mL,mR) = int F^L_{cellL,mL} * F^R_{cellR,mR} dx over
// the overlap of the two one-sided supports.
Eigen::MatrixXd pair_block(double La, double Lb, double Ra, double Rb, int k,
                           double s) {
  const int nm = k + 1;
  Eigen::MatrixXd block = Eigen::MatrixXd::Zero(nm, nm);
  if (La >= Rb) return block;  // left factor vanishes before right one starts

  const SideTerms left = side_terms(La, Lb, k, s, Side::left);
  const SideTerms right = side_terms(Ra, Rb, k, s, Side::right);

  std::vector<double> splits{La, Rb};
  if (Lb > La && Lb < Rb) splits.push_back(Lb);
  if (Ra > La && Ra < Rb) splits.push_back(Ra);
  std::sort(splits.begin(), splits.end());
  splits.erase(std::unique(splits.begin(), splits.end()), splits.end());

  const double base = std::min(Lb - La, Rb - Ra);
  Eigen::VectorXd Ls(nm), Lm(nm), Rs(nm), Rm(nm);

  for (size_t pi = 0; pi + 1 < splits.size(); ++pi) {
    const double p1 = splits[pi], p2 = splits[pi + 1];
    // series active on this piece
    std::vector<const SeriesBundle*> actL, actR;
    for (const auto& bu : left.bundles)
      if (p1 >= bu.origin) actL.push_back(&bu);
    for (const auto& bu : right.bundles)
      if (p2 <= bu.origin) actR.push_back(&bu);
    if (actL.empty() || actR.empty()) continue;

    std::vector<double> segs = graded_breakpoints(p1, p2, std::min(base, p2 - p1));
    for (size_t si = 0; si + 1 < segs.size(); ++si) {
      const double s1 = segs[si], s2 = segs[si + 1];
      const SeriesBundle* singL = nullptr;
      const SeriesBundle* singR = nullptr;
      for (const auto* bu : actL)
        if (bu->origin == s1) singL = bu;
      for (const auto* bu : actR)
        if (bu->origin == s2) singR = bu;

      // four factor-group combinations, each with its matching weight
      for (int gl = 0; gl < 2; ++gl) {
        if (gl == 0 && !singL) continue;
        for (int gr = 0; gr < 2; ++gr) {
          if (gr == 0 && !singR) continue;
          const double le = (gl == 0) ? -s : 0.0;
          const double re = (gr == 0) ? -s : 0.0;
          bool smoothL_empty = true, smoothR_empty = true;
          for (const auto* bu : actL)
            if (bu != singL) smoothL_empty = false;
          for (const auto* bu : actR)
            if (bu != singR) smoothR_empty = false;
          if (gl == 1 && smoothL_empty) continue;
          if (gr == 1 && smoothR_empty) continue;

          const QuadRule& rule = gauss_jacobi(kGramQuadPoints, le, re);
          const double len = s2 - s1;
          const double scale = std::pow(len, 1.0 + le + re);
          for (int q = 0; q < kGramQuadPoints; ++q) {
            const double x = s1 + len * rule.nodes[q];
            Eigen::VectorXd* lv;
            Eigen::VectorXd* rv;
            if (gl == 0) {
              for (int m = 0; m < nm; ++m) Ls[m] = horner(singL->coeff[m], x - singL->origin);
              lv = &Ls;
            } else {
              Lm.setZero();
              for (const auto* bu : actL) {
                if (bu == singL) continue;
                const double u = x - bu->origin;
                const double pw = std::pow(u, -s);
                for (int m = 0; m < nm; ++m) Lm[m] += horner(bu->coeff[m], u) * pw;
              }
              lv = &Lm;
            }
            if (gr == 0) {
              for (int m = 0; m < nm; ++m) Rs[m] = horner(singR->coeff[m], singR->origin - x);
              rv = &Rs;
            } else {
              Rm.setZero();
              for (const auto* bu : actR) {
                if (bu == singR) continue;
                const double u = bu->origin - x;
                const double pw = std::pow(u, -s);
                for (int m = 0; m < nm; ++m) Rm[m] += horner(bu->coeff[m], u) * pw;
              }
              rv = &Rm;
            }
            block.noalias() += (scale * rule.weights[q]) * (*lv) * rv->transpose();
          }
        }
      }
    }
  }
  return block;
}

}  // namespace

FractionalGram assemble_gram(const OverlappingMesh& mesh, MeshTag tag,
                             const BasisSpec& basis, const FractionalExponent& s,
                             int direction, PairingVariant variant,
                             bool use_translation) {
  if (!(s.value() > 0.0 && s.value() < 0.5))
    throw std::invalid_argument("assemble_gram: s must lie in (0,1/2)");
  const MeshLine& line = mesh.line(tag);
  const int nc = line.cells();
  const int nm = basis.modes();
  const double sv = s.value();

  FractionalGram gram;
  gram.tag = tag;
  gram.direction = direction;
  gram.s = sv;
  gram.k = basis.k;
  gram.matrix = Eigen::MatrixXd::Zero(nc * nm, nc * nm);

  // Entries depend on the cell pair only through widths and offset, so one
  // integral per translation class suffices; boundary half cells fall out
  // of the same keying because their width enters the key.
  std::map<std::tuple<long, long, long>, Eigen::MatrixXd> memo;
  const double unit = 0.5 * mesh.h;
  auto block_for = [&](int cellL, int cellR) {
    const double La = line.left(cellL), Lb = line.right(cellL);
    const double Ra = line.left(cellR), Rb = line.right(cellR);
    if (!use_translation) return pair_block(La, Lb, Ra, Rb, basis.k, sv);
    auto key = std::make_tuple(std::lround((Lb - La) / unit),
                               std::lround((Rb - Ra) / unit),
                               std::lround((La - Ra) / unit));
    auto it = memo.find(key);
    if (it == memo.end())
      it = memo.emplace(key, pair_block(La, Lb, Ra, Rb, basis.k, sv)).first;
    return it->second;
  };

  for (int i = 0; i < nc; ++i) {
    for (int j = 0; j < nc; ++j) {
      Eigen::MatrixXd b;
      if (variant == PairingVariant::left_trial) {
        if (line.left(j) >= line.right(i)) continue;
        b = block_for(j, i);  // B(mL,mR); row mode is the right-derivative factor
        for (int l = 0; l < nm; ++l)
          for (int m = 0; m < nm; ++m)
            gram.matrix(i * nm + l, j * nm + m) = b(m, l);
      } else {
        if (line.left(i) >= line.right(j)) continue;
        b = block_for(i, j);
        for (int l = 0; l < nm; ++l)
          for (int m = 0; m < nm; ++m)
            gram.matrix(i * nm + l, j * nm + m) = b(l, m);
      }
    }
  }
  gram.lu.compute(gram.matrix);
  // the symmetric part is positive definite, so a vanishing pivot signals
  // an assembly bug rather than a property of the scheme
  const auto pivots = gram.lu.matrixLU().diagonal().cwiseAbs();
  if (!pivots.allFinite() ||
      pivots.minCoeff() <= 1e-14 * gram.matrix.cwiseAbs().maxCoeff())
    throw std::runtime_error("assemble_gram: singular factorization");
  return gram;
}

CouplingOperator assemble_coupling(const OverlappingMesh& mesh, MeshTag from,
                                   MeshTag to, const BasisSpec& basis,
                                   BoundaryTrace trace) {
  if (from == to)
    throw std::invalid_argument("assemble_coupling: meshes must form an overlapping pair");
  const MeshLine& fl = mesh.line(from);
  const MeshLine& tl = mesh.line(to);
  const int nm = basis.modes();
  const int q = basis.k + 3;
  const QuadRule& rule = gauss_legendre(q);

  std::vector<Eigen::Triplet<double>> trip;
  for (int i = 0; i < tl.cells(); ++i) {
    const double L = tl.left(i), R = tl.right(i);
    // volume term, split at the from-mesh edge interior to this cell
    std::vector<double> cuts{L, R};
    for (double e : fl.edges)
      if (e > L && e < R) cuts.push_back(e);
    std::sort(cuts.begin(), cuts.end());
    for (size_t c = 0; c + 1 < cuts.size(); ++c) {
      const double p = cuts[c], w = cuts[c + 1] - cuts[c];
      const int jf = fl.locate(0.5 * (cuts[c] + cuts[c + 1]));
      for (int qi = 0; qi < q; ++qi) {
        const double x = p + w * rule.nodes[qi];
        const double wq = w * rule.weights[qi];
        for (int mf = 0; mf < nm; ++mf) {
          const double bf = basis_value(mf, fl.left(jf), fl.right(jf), x);
          for (int mt = 0; mt < nm; ++mt)
            trip.emplace_back(i * nm + mt, jf * nm + mf,
                              -wq * bf * basis_derivative(mt, L, R, x));
        }
      }
    }
    // trace terms; endpoints interior to a from-cell are single-valued,
    // domain-boundary points follow the requested convention
    for (int end = 0; end < 2; ++end) {
      const double x = (end == 0) ? L : R;
      const double normal = (end == 0) ? -1.0 : 1.0;
      const bool at_domain_boundary = (x == 0.0 || x == 1.0);
      if (at_domain_boundary && trace == BoundaryTrace::zero_exterior) continue;
      const int jf = fl.locate(x);
      for (int mf = 0; mf < nm; ++mf) {
        const double bf = basis_value(mf, fl.left(jf), fl.right(jf), x);
        for (int mt = 0; mt < nm; ++mt)
          trip.emplace_back(i * nm + mt, jf * nm + mf,
                            normal * bf * basis_value(mt, L, R, x));
      }
    }
  }
  CouplingOperator op;
  op.from = from;
  op.to = to;
  op.trace = trace;
  op.matrix.resize(tl.cells() * nm, fl.cells() * nm);
  op.matrix.setFromTriplets(trip.begin(), trip.end());
  return op;
}

OverlapMass assemble_overlap_mass(const OverlappingMesh& mesh, MeshTag from,
                                  MeshTag to, const BasisSpec& basis) {
  const MeshLine& fl = mesh.line(from);
  const MeshLine& tl = mesh.line(to);
  const int nm = basis.modes();
  const int q = basis.k + 3;
  const QuadRule& rule = gauss_legendre(q);

  std::vector<Eigen::Triplet<double>> trip;
  for (int i = 0; i < tl.cells(); ++i) {
    const double L = tl.left(i), R = tl.right(i);
    std::vector<double> cuts{L, R};
    for (double e : fl.edges)
      if (e > L && e < R) cuts.push_back(e);
    std::sort(cuts.begin(), cuts.end());
    for (size_t c = 0; c + 1 < cuts.size(); ++c) {
      const double p = cuts[c], w = cuts[c + 1] - cuts[c];
      const int jf = fl.locate(0.5 * (cuts[c] + cuts[c + 1]));
      for (int qi = 0; qi < q; ++qi) {
        const double x = p + w * rule.nodes[qi];
        const double wq = w * rule.weights[qi];
        for (int mf = 0; mf < nm; ++mf) {
          const double bf = basis_value(mf, fl.left(jf), fl.right(jf), x);
          for (int mt = 0; mt < nm; ++mt)
            trip.emplace_back(i * nm + mt, jf * nm + mf,
                              wq * bf * basis_value(mt, L, R, x));
        }
      }
    }
  }
  OverlapMass op;
  op.from = from;
  op.to = to;
  op.matrix.resize(tl.cells() * nm, fl.cells() * nm);
  op.matrix.setFromTriplets(trip.begin(), trip.end());
  return op;
}

Eigen::VectorXd solve_aux(const FractionalGram& gram, const Eigen::VectorXd& rhs) {
  return gram.lu.solve(rhs);
}

Eigen::MatrixXd solve_aux_2d(const FractionalGram& gram_x, const Eigen::MatrixXd& rhs) {
  return gram_x.lu.solve(rhs);
}

void dump_matrix(std::ostream& os, const FractionalGram& gram, int n_cells) {
  os << (gram.tag == MeshTag::primal ? "primal" : "dual") << ' ' << gram.s << ' '
     << n_cells << ' ' << gram.k << ' ' << gram.direction << ' '
     << gram.matrix.rows() << ' ' << gram.matrix.cols() << '\n';
  os.precision(17);
  for (int i = 0; i < gram.matrix.rows(); ++i) {
    for (int j = 0; j < gram.matrix.cols(); ++j)
      os << gram.matrix(i, j) << (j + 1 == gram.matrix.cols() ? '\n' : ' ');
  }
}

void dump_matrix(const std::string& path, const FractionalGram& gram, int n_cells) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("dump_matrix: cannot open " + path);
  dump_matrix(os, gram, n_cells);
}

Eigen::MatrixXd load_matrix_dump(std::istream& is) {
  std::string tag;
  double s;
  int n, k, dir;
  long rows, cols;
  is >> tag >> s >> n >> k >> dir >> rows >> cols;
  Eigen::MatrixXd m(rows, cols);
  for (long i = 0; i < rows; ++i)
    for (long j = 0; j < cols; ++j) is >> m(i, j);
  if (!is) throw std::runtime_error("load_matrix_dump: malformed dump");
  return m;
}

}  // namespace cldg
