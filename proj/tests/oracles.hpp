#pragma once

// Independent quadrature routes used as test oracles. Everything here goes
// through the integral definitions of the fractional operators (plus the
// derivative-transfer identity with its boundary term), never through the
// closed-form power rule the library uses.

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <vector>

#include "cldg/quadrature.hpp"

namespace oracle {

using Fn = std::function<double(double)>;

// a_I_x^sigma u by Gauss-Jacobi quadrature of the defining integral.
inline double frac_integral(const Fn& u, double sigma, double a, double x,
                            int n = 24) {
  if (x <= a) return 0.0;
  const cldg::QuadRule& r = cldg::gauss_jacobi(n, 0.0, sigma - 1.0);
  const double len = x - a;
  double acc = 0.0;
  for (int i = 0; i < n; ++i)
    acc += r.weights[i] * u(a + len * r.nodes[i]);
  return std::pow(len, sigma) * acc / std::tgamma(sigma);
}

// a_D_x^s u for s in (0,1), u continuously differentiable on [a,x]:
// quadrature of the transferred integral plus the boundary term
// u(a) (x-a)^{-s} / Gamma(1-s).
inline double frac_deriv(const Fn& u, const Fn& du, double s, double a,
                         double x, int n = 24) {
  const cldg::QuadRule& r = cldg::gauss_jacobi(n, 0.0, -s);
  const double len = x - a;
  double acc = 0.0;
  for (int i = 0; i < n; ++i)
    acc += r.weights[i] * du(a + len * r.nodes[i]);
  return (std::pow(len, 1.0 - s) * acc + u(a) * std::pow(len, -s)) /
         std::tgamma(1.0 - s);
}

// Mirrored variant x_D_b^s u with the boundary term at b.
inline double frac_deriv_right(const Fn& u, const Fn& du, double s, double b,
                               double x, int n = 24) {
  const cldg::QuadRule& r = cldg::gauss_jacobi(n, -s, 0.0);
  const double len = b - x;
  double acc = 0.0;
  for (int i = 0; i < n; ++i)
    acc += r.weights[i] * (-du(x + len * r.nodes[i]));
  return (std::pow(len, 1.0 - s) * acc + u(b) * std::pow(len, -s)) /
         std::tgamma(1.0 - s);
}

// Order alpha in (1,2) for u with u(a) = u'(a) = 0:  a_D^alpha u = a_I^{2-alpha} u''.
inline double frac_deriv_whole(const Fn& ddu, double alpha, double a, double x,
                               int n = 24) {
  return frac_integral(ddu, 2.0 - alpha, a, x, n);
}

inline double frac_deriv_whole_right(const Fn& ddu, double alpha, double b,
                                     double x, int n = 24) {
  if (x >= b) return 0.0;
  const double sigma = 2.0 - alpha;
  const cldg::QuadRule& r = cldg::gauss_jacobi(n, sigma - 1.0, 0.0);
  const double len = b - x;
  double acc = 0.0;
  for (int i = 0; i < n; ++i)
    acc += r.weights[i] * ddu(x + len * r.nodes[i]);
  return std::pow(len, sigma) * acc / std::tgamma(sigma);
}

// D^s(I^s p) at x through nested quadrature: the outer integral carries the
// exact two-sided weight (xi-a)^s (x-xi)^{-s}, the inner one evaluates
// I^s p' pointwise. Equals p(x) when the left-inverse identity holds.
inline double deriv_of_integral(const Fn& p, const Fn& dp, double s, double a,
                                double x, int n = 24) {
  const cldg::QuadRule& r = cldg::gauss_jacobi(n, s, -s);
  const double len = x - a;
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    const double xi = a + len * r.nodes[i];
    const double inner = frac_integral(dp, s, a, xi, n);
    acc += r.weights[i] * inner / std::pow(xi - a, s);
  }
  return p(a) + std::pow(len, 1.0) * acc / std::tgamma(1.0 - s);
}

// exp(A) by scaled Taylor summation; fine for the small matrices in tests.
inline Eigen::MatrixXd expm(const Eigen::MatrixXd& A, int terms = 30) {
  Eigen::MatrixXd acc = Eigen::MatrixXd::Identity(A.rows(), A.cols());
  Eigen::MatrixXd term = acc;
  for (int k = 1; k <= terms; ++k) {
    term = (term * A) / k;
    acc += term;
  }
  return acc;
}

}  // namespace oracle
