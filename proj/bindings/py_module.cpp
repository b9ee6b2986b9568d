#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <map>
#include <string>
#include <vector>

#include "cldg/problems.hpp"
#include "cldg/quadrature.hpp"
#include "cldg/study.hpp"

namespace py = pybind11;

namespace {

cldg::StudyConfig make_config(const std::string& problem, double alpha,
                              double beta, int k, const std::vector<int>& cells,
                              const std::string& integrator,
                              std::optional<double> tau_max_coeff,
                              std::optional<double> tau_ratio,
                              std::optional<double> T) {
  std::map<std::string, std::string> cfg{{"problem", problem},
                                         {"alpha", std::to_string(alpha)}};
  if (beta > 0.0) cfg["beta"] = std::to_string(beta);
  cldg::StudyConfig study;
  study.problem = cldg::custom_problem(cfg);
  study.problem_name = problem;
  study.k = k;
  study.cells = cells;
  study.tau_max_coeff = tau_max_coeff;
  study.tau_ratio = tau_ratio;
  if (T) study.T_override = T;
  if (integrator == "forward_euler")
    study.integrator = cldg::Integrator::forward_euler;
  study.validate();
  return study;
}

py::list rows_to_py(const cldg::StudyResult& result) {
  py::list rows;
  for (const auto& row : result.rows) {
    py::dict d;
    d["inv_h"] = row.inv_h;
    d["E1"] = row.E1;
    d["E2"] = row.E2;
    d["rate1"] = std::isnan(row.rate1) ? py::object(py::none()) : py::cast(row.rate1);
    d["rate2"] = std::isnan(row.rate2) ? py::object(py::none()) : py::cast(row.rate2);
    d["failed"] = row.failed;
    rows.append(d);
  }
  return rows;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "central local discontinuous Galerkin solver for space-fractional "
            "diffusion on overlapping meshes";

  m.def(
      "rl_power_rule",
      [](double s, int mm, double a, double x) {
        return cldg::rl_power_rule(cldg::FractionalExponent::unit_interval(s),
                                   mm, a, x);
      },
      py::arg("s"), py::arg("m"), py::arg("a"), py::arg("x"),
      "Left Riemann-Liouville derivative of (x-a)^m of order s in (0,1)");

  m.def(
      "left_frac_deriv",
      [](double a, double b, const std::vector<double>& modal, double s,
         double x) {
        cldg::CellPolynomial p{a, b, modal};
        return cldg::left_frac_deriv_cellpoly(
            p, cldg::FractionalExponent::unit_interval(s), x);
      },
      py::arg("a"), py::arg("b"), py::arg("modal"), py::arg("s"), py::arg("x"),
      "Left derivative of a zero-extended cell polynomial (modal Legendre "
      "coefficients on [a,b])");

  m.def(
      "gauss_jacobi_rule",
      [](int n, double exponent) { return cldg::gauss_jacobi_rule(n, exponent); },
      py::arg("n"), py::arg("exponent"),
      "Nodes and weights on (0,1) for the weight t^exponent, exponent in (-1,0)");

  m.def(
      "gl_fractional_derivative",
      [](const std::vector<double>& samples, double s, double h,
         const std::string& side) {
        return cldg::gl_fractional_derivative(
            samples, cldg::FractionalExponent::unit_interval(s), h,
            side == "right" ? cldg::Side::right : cldg::Side::left);
      },
      py::arg("samples"), py::arg("s"), py::arg("grid_step"),
      py::arg("side") = "left");

  m.def(
      "build_mesh",
      [](int dimension, int n) {
        const cldg::OverlappingMesh mesh = cldg::build_mesh(dimension, n);
        py::dict d;
        d["dimension"] = mesh.dimension;
        d["n"] = mesh.n;
        d["h"] = mesh.h;
        d["primal_edges"] = mesh.primal.edges;
        d["dual_edges"] = mesh.dual.edges;
        return d;
      },
      py::arg("dimension"), py::arg("n"));

  m.def(
      "run_convergence",
      [](const std::string& problem, double alpha, double beta, int k,
         const std::vector<int>& cells, const std::string& integrator,
         std::optional<double> tau_max_coeff, std::optional<double> tau_ratio,
         std::optional<double> T) {
        const cldg::StudyConfig study =
            make_config(problem, alpha, beta, k, cells, integrator,
                        tau_max_coeff, tau_ratio, T);
        return rows_to_py(cldg::run_convergence(study));
      },
      py::arg("problem"), py::arg("alpha"), py::arg("beta") = 0.0,
      py::arg("k") = 1, py::arg("cells") = std::vector<int>{8, 16},
      py::arg("integrator") = "ssp_rk3",
      py::arg("tau_max_coeff") = std::nullopt,
      py::arg("tau_ratio") = std::nullopt, py::arg("T") = std::nullopt,
      "Error/rate study; returns a list of row dicts");

  m.def(
      "run_stability",
      [](const std::string& problem, double alpha, int k,
         const std::vector<int>& cells, long max_steps) {
        std::map<std::string, std::string> cfg{{"problem", problem},
                                               {"alpha", std::to_string(alpha)}};
        cldg::StudyConfig study;
        study.problem = cldg::custom_problem(cfg);
        study.k = k;
        study.cells = cells;
        study.max_steps = max_steps;
        study.validate();
        const cldg::StabilityResult res = cldg::run_stability(study);
        py::dict d;
        d["non_increasing"] = res.non_increasing;
        d["max_relative_increase"] = res.max_relative_increase;
        py::list traces;
        for (const auto& tr : res.traces) {
          py::dict td;
          td["inv_h"] = tr.inv_h;
          td["trace"] = tr.trace;
          traces.append(td);
        }
        d["traces"] = traces;
        return d;
      },
      py::arg("problem") = "example1", py::arg("alpha") = 1.5, py::arg("k") = 1,
      py::arg("cells") = std::vector<int>{8}, py::arg("max_steps") = 100,
      "Zero-source energy monotonicity check");
}
