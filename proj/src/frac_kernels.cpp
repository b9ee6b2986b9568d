#include "cldg/frac_kernels.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace cldg {

namespace {

constexpr double kDiffusionGuard = 1e-6;

// Binomial coefficients as doubles; fine for the degrees in play.
double binom(int n, int r) {
  double v = 1.0;
  for (int i = 1; i <= r; ++i) v *= static_cast<double>(n - r + i) / i;
  return v;
}

// Legendre P_m and its derivative on [-1,1] by recurrence.
double legendre(int m, double u) {
  double p0 = 1.0, p1 = u;
  if (m == 0) return p0;
  for (int j = 2; j <= m; ++j) {
    double p2 = ((2.0 * j - 1.0) * u * p1 - (j - 1.0) * p0) / j;
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

}  // namespace

FractionalExponent FractionalExponent::unit_interval(double s) {
  if (!(s > 0.0 && s < 1.0))
    throw std::invalid_argument("fractional order must lie in (0,1)");
  return FractionalExponent(s);
}

FractionalExponent FractionalExponent::gram_order(double s) {
  if (!(s > 0.0 && s < 0.5))
    throw std::invalid_argument("Gram pairing order must lie in (0,1/2)");
  return FractionalExponent(s);
}

FractionalExponent FractionalExponent::diffusion_order(double a) {
  if (!(a > 1.0 + kDiffusionGuard && a < 2.0 - kDiffusionGuard))
    throw std::invalid_argument("diffusion order must lie in (1,2)");
  return FractionalExponent(a);
}

double CellPolynomial::extension(double x) const {
  const double w = b - a;
  const double u = 2.0 * (x - a) / w - 1.0;
  double v = 0.0;
  for (int m = 0; m < static_cast<int>(modal.size()); ++m)
    v += modal[m] * std::sqrt((2.0 * m + 1.0) / w) * legendre(m, u);
  return v;
}

double CellPolynomial::operator()(double x) const {
  if (x < a || x > b) return 0.0;
  return extension(x);
}

std::vector<double> CellPolynomial::expand(double origin, int sign) const {
  // P_m(-1 + 2t) = sum_r (-1)^(m+r) C(m,r) C(m+r,r) t^r and
  // P_m( 1 + 2t) = sum_r          C(m,r) C(m+r,r) t^r
  // give the expansion around either support endpoint; the variable maps
  // are t = sgn*(u)/w with u = x-origin (sign=+1) or origin-x (sign=-1).
  const double w = b - a;
  const int k = degree();
  const bool at_a = (origin == a);
  if (!at_a && origin != b)
    throw std::invalid_argument("CellPolynomial::expand: origin must be a support endpoint");
  std::vector<double> c(k + 1, 0.0);
  for (int m = 0; m <= k; ++m) {
    const double norm = modal[m] * std::sqrt((2.0 * m + 1.0) / w);
    for (int r = 0; r <= m; ++r) {
      const double base = binom(m, r) * binom(m + r, r) / std::pow(w, r);
      double factor = at_a ? ((m + r) % 2 == 0 ? 1.0 : -1.0) : 1.0;
      if (sign < 0) factor *= (r % 2 == 0 ? 1.0 : -1.0);
      c[r] += norm * factor * base;
    }
  }
  return c;
}

double power_rule_factor(double m, double s) {
  return std::exp(std::lgamma(m + 1.0) - std::lgamma(m + 1.0 - s));
}

double rl_power_rule(const FractionalExponent& s, int m, double a, double x) {
  if (m < 0) throw std::invalid_argument("rl_power_rule: m must be >= 0");
  if (x < a) throw std::domain_error("rl_power_rule: x must satisfy x >= a");
  return power_rule_factor(m, s.value()) * std::pow(x - a, m - s.value());
}

double rl_power_rule_right(const FractionalExponent& s, int m, double b, double x) {
  if (m < 0) throw std::invalid_argument("rl_power_rule_right: m must be >= 0");
  if (x > b) throw std::domain_error("rl_power_rule_right: x must satisfy x <= b");
  return power_rule_factor(m, s.value()) * std::pow(b - x, m - s.value());
}

double FracDerivTerms::eval(double x) const {
  double acc = 0.0;
  for (const FracSeries& ser : series) {
    const double u = (side == Side::left) ? x - ser.origin : ser.origin - x;
    if (u < 0.0 || (u == 0.0 && !ser.primary)) continue;
    if (u == 0.0) {
      // interior-branch limit at the support endpoint
      if (ser.coeff[0] != 0.0)
        acc += ser.coeff[0] * std::numeric_limits<double>::infinity();
      continue;
    }
    double v = 0.0;
    for (int r = static_cast<int>(ser.coeff.size()) - 1; r >= 0; --r)
      v = v * u + ser.coeff[r];
    acc += v * std::pow(u, -s);
  }
  return acc;
}

namespace {

FracDerivTerms deriv_terms(const CellPolynomial& p, double s, Side side) {
  FracDerivTerms out;
  out.side = side;
  out.s = s;
  const int k = p.degree();
  auto scaled = [&](std::vector<double> c, double sign) {
    for (int r = 0; r <= k; ++r) c[r] *= sign * power_rule_factor(r, s);
    return c;
  };
  if (side == Side::left) {
    // 0_D^s p = aD^s ext(p) for x in (a,b]; for x > b subtract the
    // lower-limit-b derivative of the smooth extension.
    out.series.push_back({p.a, true, scaled(p.expand(p.a, +1), +1.0)});
    out.series.push_back({p.b, false, scaled(p.expand(p.b, +1), -1.0)});
  } else {
    out.series.push_back({p.b, true, scaled(p.expand(p.b, -1), +1.0)});
    out.series.push_back({p.a, false, scaled(p.expand(p.a, -1), -1.0)});
  }
  return out;
}

}  // namespace

FracDerivTerms left_frac_deriv_terms(const CellPolynomial& p,
                                     const FractionalExponent& s) {
  return deriv_terms(p, s.value(), Side::left);
}

FracDerivTerms right_frac_deriv_terms(const CellPolynomial& p,
                                      const FractionalExponent& s) {
  return deriv_terms(p, s.value(), Side::right);
}

double left_frac_deriv_cellpoly(const CellPolynomial& p,
                                const FractionalExponent& s, double x) {
  if (x < 0.0 || x > 1.0)
    throw std::domain_error("left_frac_deriv_cellpoly: x must lie in [0,1]");
  if (x <= p.a) return 0.0;
  return left_frac_deriv_terms(p, s).eval(x);
}

double right_frac_deriv_cellpoly(const CellPolynomial& p,
                                 const FractionalExponent& s, double x) {
  if (x < 0.0 || x > 1.0)
    throw std::domain_error("right_frac_deriv_cellpoly: x must lie in [0,1]");
  if (x >= p.b) return 0.0;
  return right_frac_deriv_terms(p, s).eval(x);
}

std::vector<double> gl_fractional_derivative(const std::vector<double>& samples,
                                             const FractionalExponent& s,
                                             double grid_step, Side side) {
  const int n = static_cast<int>(samples.size());
  if (n < 2)
    throw std::invalid_argument("gl_fractional_derivative: need >= 2 samples");
  if (grid_step <= 0.0)
    throw std::invalid_argument("gl_fractional_derivative: grid_step must be > 0");
  const double sv = s.value();
  std::vector<double> g(n + 1);
  g[0] = 1.0;
  for (int j = 1; j <= n; ++j) g[j] = g[j - 1] * (j - 1.0 - sv) / j;
  const double scale = std::pow(grid_step, -sv);

  std::vector<double> out(n, 0.0);
  auto sample = [&](int idx) { return samples[idx]; };
  for (int i = 0; i < n; ++i) {
    // shift-1 stencil where the shifted sample exists, shift-0 otherwise
    const int upwind = (side == Side::left) ? i : n - 1 - i;
    const int shift = (upwind + 1 < n) ? 1 : 0;
    double acc = 0.0;
    for (int j = 0; j <= upwind + shift; ++j) {
      const int off = j - shift;
      const int idx = (side == Side::left) ? i - off : i + off;
      acc += g[j] * sample(idx);
    }
    out[i] = scale * acc;
  }
  return out;
}

}  // namespace cldg
