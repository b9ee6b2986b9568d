#include <doctest.h>

#include <cmath>

#include "cldg/quadrature.hpp"

using namespace cldg;

TEST_CASE("gauss-legendre integrates polynomials exactly") {
  for (int n = 1; n <= 8; ++n) {
    const QuadRule& r = gauss_legendre(n);
    for (int d = 0; d <= 2 * n - 1; ++d) {
      double acc = 0.0;
      for (int i = 0; i < n; ++i)
        acc += r.weights[i] * std::pow(r.nodes[i], d);
      CHECK(acc == doctest::Approx(1.0 / (d + 1)).epsilon(1e-13));
    }
  }
}

TEST_CASE("jacobi rule integrates t^-1/2 with one node") {
  auto [nodes, weights] = gauss_jacobi_rule(1, -0.5);
  CHECK(nodes.size() == 1);
  CHECK(weights[0] == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("jacobi rule closed forms") {
  // int_0^1 t^-0.3 * t dt = 1/1.7
  auto [n1, w1] = gauss_jacobi_rule(1, -0.3);
  double acc = 0.0;
  for (size_t i = 0; i < n1.size(); ++i) acc += w1[i] * n1[i];
  CHECK(acc == doctest::Approx(1.0 / 1.7).epsilon(1e-12));

  // int_0^1 t^-0.45 * t^3 dt = 1/3.55
  for (int n = 2; n <= 6; ++n) {
    auto [nodes, weights] = gauss_jacobi_rule(n, -0.45);
    acc = 0.0;
    for (size_t i = 0; i < nodes.size(); ++i)
      acc += weights[i] * std::pow(nodes[i], 3);
    CHECK(acc == doctest::Approx(1.0 / 3.55).epsilon(1e-12));
  }
}

TEST_CASE("two-sided jacobi weight matches beta function moments") {
  // int_0^1 t^(-0.25) (1-t)^(-0.4) t^d dt = B(d + 0.75, 0.6)
  const QuadRule& r = gauss_jacobi(8, -0.25, -0.4);
  for (int d = 0; d <= 5; ++d) {
    double acc = 0.0;
    for (int i = 0; i < r.nodes.size(); ++i)
      acc += r.weights[i] * std::pow(r.nodes[i], d);
    CHECK(acc == doctest::Approx(std::beta(d + 0.75, 0.6)).epsilon(1e-12));
  }
}

TEST_CASE("invalid rules are rejected") {
  CHECK_THROWS_AS(gauss_jacobi_rule(0, -0.5), std::invalid_argument);
  CHECK_THROWS_AS(gauss_jacobi_rule(4, -1.5), std::invalid_argument);
  CHECK_THROWS_AS(gauss_jacobi_rule(4, 0.5), std::invalid_argument);
}

TEST_CASE("weighted segment integration") {
  // int_1^3 (x-1)^(-0.3) dx = 2^0.7 / 0.7
  const double v = integrate_weighted([](double) { return 1.0; }, 1.0, 3.0,
                                      -0.3, 0.0, 6);
  CHECK(v == doctest::Approx(std::pow(2.0, 0.7) / 0.7).epsilon(1e-13));
}
