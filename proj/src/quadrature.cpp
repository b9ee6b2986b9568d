#include "cldg/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>

namespace cldg {

namespace {

// Golub-Welsch for the Jacobi weight (1-x)^a (1+x)^b on [-1,1], mapped to
// (0,1) so that the singularity of strength b sits at t=0 and a at t=1.
QuadRule build_jacobi(int n, double left_exp, double right_exp) {
  const double a = right_exp;
  const double b = left_exp;
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  const double apb = a + b;
  for (int k = 0; k < n; ++k) {
    double diag;
    if (k == 0)
      diag = (b - a) / (apb + 2.0);
    else
      diag = (b * b - a * a) /
             ((2.0 * k + apb) * (2.0 * k + apb + 2.0));
    J(k, k) = diag;
    if (k >= 1) {
      double beta;
      if (k == 1)
        beta = 4.0 * (1.0 + a) * (1.0 + b) /
               ((apb + 2.0) * (apb + 2.0) * (apb + 3.0));
      else
        beta = 4.0 * k * (k + a) * (k + b) * (k + apb) /
               ((2.0 * k + apb) * (2.0 * k + apb) * (2.0 * k + apb + 1.0) *
                (2.0 * k + apb - 1.0));
      J(k, k - 1) = J(k - 1, k) = std::sqrt(beta);
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  const double mass = std::beta(a + 1.0, b + 1.0);  // total weight on (0,1)
  QuadRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    rule.nodes[i] = 0.5 * (1.0 + es.eigenvalues()[i]);
    const double v0 = es.eigenvectors()(0, i);
    rule.weights[i] = mass * v0 * v0;
  }
  return rule;
}

}  // namespace

const QuadRule& gauss_jacobi(int n, double left_exp, double right_exp) {
  if (n < 1) throw std::invalid_argument("gauss_jacobi: n must be >= 1");
  if (left_exp <= -1.0 || right_exp <= -1.0)
    throw std::invalid_argument("gauss_jacobi: exponents must be > -1");
  static std::map<std::tuple<int, double, double>, QuadRule> cache;
  static std::mutex mutex;
  std::lock_guard<std::mutex> lock(mutex);
  auto key = std::make_tuple(n, left_exp, right_exp);
  auto it = cache.find(key);
  if (it == cache.end())
    it = cache.emplace(key, build_jacobi(n, left_exp, right_exp)).first;
  return it->second;
}

std::pair<std::vector<double>, std::vector<double>>
gauss_jacobi_rule(int n, double exponent) {
  if (n < 1) throw std::invalid_argument("gauss_jacobi_rule: n must be >= 1");
  if (!(exponent > -1.0 && exponent < 0.0))
    throw std::invalid_argument("gauss_jacobi_rule: exponent must lie in (-1,0)");
  const QuadRule& r = gauss_jacobi(n, exponent, 0.0);
  return {std::vector<double>(r.nodes.data(), r.nodes.data() + n),
          std::vector<double>(r.weights.data(), r.weights.data() + n)};
}

}  // namespace cldg
