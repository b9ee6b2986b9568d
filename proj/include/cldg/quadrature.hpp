#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

namespace cldg {

/// Nodes and weights on (0,1) for the weight t^left_exp * (1-t)^right_exp.
struct QuadRule {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;
};

/// Gauss-Jacobi rule on (0,1) with weight t^left_exp * (1-t)^right_exp,
/// exact for polynomials of degree <= 2n-1 against that weight.
/// Exponents must be > -1. Rules are cached; thread-safe.
const QuadRule& gauss_jacobi(int n, double left_exp, double right_exp);

/// Gauss-Legendre rule on (0,1).
inline const QuadRule& gauss_legendre(int n) { return gauss_jacobi(n, 0.0, 0.0); }

/// Rule on (0,1) for the singular weight t^exponent with exponent in (-1,0),
/// integrating t^exponent * p(t) exactly for polynomials p of degree <= 2n-1.
std::pair<std::vector<double>, std::vector<double>>
gauss_jacobi_rule(int n, double exponent);

/// Integrate f over [a,b] with an n-point Gauss-Legendre rule.
template <class F>
double integrate(F&& f, double a, double b, int n) {
  const QuadRule& r = gauss_legendre(n);
  const double len = b - a;
  double acc = 0.0;
  for (int i = 0; i < r.nodes.size(); ++i)
    acc += r.weights[i] * f(a + len * r.nodes[i]);
  return len * acc;
}

/// Integrate (x-a)^left_exp * (b-x)^right_exp * g(x) over [a,b]; g is the
/// smooth remainder evaluated without the endpoint weight factors.
template <class F>
double integrate_weighted(F&& g, double a, double b, double left_exp,
                          double right_exp, int n) {
  const QuadRule& r = gauss_jacobi(n, left_exp, right_exp);
  const double len = b - a;
  double acc = 0.0;
  for (int i = 0; i < r.nodes.size(); ++i)
    acc += r.weights[i] * g(a + len * r.nodes[i]);
  return std::pow(len, 1.0 + left_exp + right_exp) * acc;
}

}  // namespace cldg
