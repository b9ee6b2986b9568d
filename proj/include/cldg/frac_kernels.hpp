#pragma once

#include <vector>

namespace cldg {

enum class Side { left, right };

/// A validated fractional order. Three admissible ranges, one per use:
/// kernel orders s in (0,1), Gram pairing orders s = (2-alpha)/2 in (0,1/2),
/// and diffusion orders alpha in (1,2) with a 1e-6 guard band.
class FractionalExponent {
 public:
  static FractionalExponent unit_interval(double s);   // (0,1)
  static FractionalExponent gram_order(double s);      // (0,1/2)
  static FractionalExponent diffusion_order(double a); // (1+eps, 2-eps)

  double value() const { return value_; }

 private:
  explicit FractionalExponent(double v) : value_(v) {}
  double value_;
};

/// Polynomial of degree <= k supported on a cell [a,b] within [0,1] and
/// extended by zero outside. Coefficients are modal: orthonormal Legendre
/// on the cell, mode m scaled by sqrt((2m+1)/(b-a)).
struct CellPolynomial {
  double a = 0.0;
  double b = 1.0;
  std::vector<double> modal;  // size k+1

  int degree() const { return static_cast<int>(modal.size()) - 1; }
  /// Value under the zero-extension convention (0 outside [a,b]).
  double operator()(double x) const;
  /// The same polynomial formula evaluated anywhere (smooth extension).
  double extension(double x) const;
  /// Coefficients of the expansion sum_r c_r * u^r where u = x - origin
  /// (for sign=+1) or u = origin - x (for sign=-1).
  std::vector<double> expand(double origin, int sign) const;
};

/// Riemann-Liouville power rule: for u(xi) = (xi - a)^m the left derivative
/// of order s at x >= a is Gamma(m+1)/Gamma(m+1-s) * (x-a)^(m-s).
double rl_power_rule(const FractionalExponent& s, int m, double a, double x);

/// Mirrored variant: for u(xi) = (b - xi)^m the right derivative of order s
/// at x <= b is Gamma(m+1)/Gamma(m+1-s) * (b-x)^(m-s).
double rl_power_rule_right(const FractionalExponent& s, int m, double b, double x);

/// Gamma(m+1)/Gamma(m+1-s) via log-gamma.
double power_rule_factor(double m, double s);

/// One-sided derivative of a cell-supported polynomial as a short sum of
/// power series anchored at the support endpoints. For the left side, the
/// series at `origin` contributes sum_r c_r (x-origin)^(r-s) for x beyond
/// the origin; primary series activate at x == origin as well (interior
/// branch), correction series strictly beyond. Mirrored for the right side.
struct FracSeries {
  double origin;
  bool primary;
  std::vector<double> coeff;  // c_r, power-rule factors folded in
};

struct FracDerivTerms {
  Side side;
  double s;
  std::vector<FracSeries> series;

  double eval(double x) const;
};

/// Term representation of (0_D_x^s p)(x) for zero-extended p.
FracDerivTerms left_frac_deriv_terms(const CellPolynomial& p,
                                     const FractionalExponent& s);
/// Term representation of (x_D_1^s p)(x).
FracDerivTerms right_frac_deriv_terms(const CellPolynomial& p,
                                      const FractionalExponent& s);

/// (0_D_x^s p)(x) for x in [0,1]; zero for x <= a.
double left_frac_deriv_cellpoly(const CellPolynomial& p,
                                const FractionalExponent& s, double x);
/// (x_D_1^s p)(x) for x in [0,1]; zero for x >= b.
double right_frac_deriv_cellpoly(const CellPolynomial& p,
                                 const FractionalExponent& s, double x);

/// First-order shifted Grunwald-Letnikov approximation of the one-sided
/// derivative of order s at every node of a uniform grid. Samples must
/// represent a function vanishing at the boundary on the lower-limit side.
/// The shift-1 stencil is used where it fits; the last node on the
/// upper-limit side falls back to the unshifted stencil.
std::vector<double> gl_fractional_derivative(const std::vector<double>& samples,
                                             const FractionalExponent& s,
                                             double grid_step, Side side);

}  // namespace cldg
