#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cldg/assembly.hpp"
#include "cldg/problems.hpp"
#include "cldg/study.hpp"

namespace {

struct CliOptions {
  std::string problem = "example1";
  std::string config_path;
  std::optional<double> alpha, beta;
  int k = 1;
  std::vector<int> cells;
  std::optional<double> T;
  std::optional<double> tau_max_coeff, tau_ratio;
  std::string integrator = "ssp_rk3";
  std::string out;
  std::string format = "csv";
  unsigned seed = 0;
  std::optional<long> max_steps;
  std::string dump_dir;
};

void add_common_flags(CLI::App* cmd, CliOptions& opt) {
  cmd->add_option("--problem", opt.problem, "example1 | example2 | custom")
      ->envname("CLDG_PROBLEM");
  cmd->add_option("--config", opt.config_path, "key=value problem config file")
      ->envname("CLDG_CONFIG");
  cmd->add_option("--alpha", opt.alpha, "fractional order in x")->envname("CLDG_ALPHA");
  cmd->add_option("--beta", opt.beta, "fractional order in y")->envname("CLDG_BETA");
  cmd->add_option("--k", opt.k, "polynomial degree")->envname("CLDG_K");
  cmd->add_option("--cells", opt.cells, "comma list of 1/h values")
      ->delimiter(',')
      ->envname("CLDG_CELLS");
  cmd->add_option("--tmax-final", opt.T, "final time T")->envname("CLDG_TMAX_FINAL");
  cmd->add_option("--tau-max-coeff", opt.tau_max_coeff,
                  "tau_max = coeff * h^alpha")
      ->envname("CLDG_TAU_MAX_COEFF");
  cmd->add_option("--tau-coeff", opt.tau_ratio, "tau = coeff * tau_max")
      ->envname("CLDG_TAU_COEFF");
  cmd->add_option("--integrator", opt.integrator, "ssp_rk3 | forward_euler")
      ->envname("CLDG_INTEGRATOR");
  cmd->add_option("--out", opt.out, "output path base")->envname("CLDG_OUT");
  cmd->add_option("--format", opt.format, "csv | json | both")->envname("CLDG_FORMAT");
  cmd->add_option("--seed", opt.seed, "seed recorded with the study")
      ->envname("CLDG_SEED");
  cmd->add_option("--max-steps", opt.max_steps,
                  "cap on time steps (stability runs)")
      ->envname("CLDG_MAX_STEPS");
}

cldg::StudyConfig make_study(const CliOptions& opt) {
  std::map<std::string, std::string> cfg;
  if (!opt.config_path.empty()) cfg = cldg::parse_config_file(opt.config_path);
  if (!cfg.count("problem")) cfg["problem"] = opt.problem;
  if (opt.alpha) cfg["alpha"] = std::to_string(*opt.alpha);
  if (opt.beta) cfg["beta"] = std::to_string(*opt.beta);
  if (opt.T) cfg["T"] = std::to_string(*opt.T);
  if (!cfg.count("alpha")) cfg["alpha"] = "1.5";

  cldg::StudyConfig study;
  study.problem = cldg::custom_problem(cfg);
  study.problem_name = cfg["problem"];
  study.k = opt.k;
  study.cells = opt.cells;
  if (study.cells.empty()) {
    if (study.problem.spec.dimension == 2)
      study.cells = {4, 8, 12, 16};
    else
      study.cells = (opt.k >= 2) ? std::vector<int>{4, 8, 16, 32}
                                 : std::vector<int>{8, 16, 32, 64};
  }
  if (opt.T) study.T_override = *opt.T;
  study.tau_max_coeff = opt.tau_max_coeff;
  study.tau_ratio = opt.tau_ratio;
  if (opt.integrator == "ssp_rk3")
    study.integrator = cldg::Integrator::ssp_rk3;
  else if (opt.integrator == "forward_euler")
    study.integrator = cldg::Integrator::forward_euler;
  else
    throw std::invalid_argument("unknown integrator: " + opt.integrator);
  study.out_base = opt.out;
  study.format = opt.format;
  study.seed = opt.seed;
  study.max_steps = opt.max_steps;
  study.validate();
  return study;
}

int do_run(const CliOptions& opt) {
  cldg::StudyConfig study = make_study(opt);
  const int n = study.cells.front();
  cldg::ProblemSpec spec = study.problem.spec;
  if (study.T_override) spec.T = *study.T_override;
  const cldg::OverlappingMesh mesh = cldg::build_mesh(spec.dimension, n);
  const cldg::BasisSpec basis{study.k};
  const cldg::TimeControls controls =
      study.policy().resolve(mesh.h, spec.alpha, spec.beta, spec.dimension);

  if (!opt.dump_dir.empty()) {
    namespace fs = std::filesystem;
    fs::create_directories(opt.dump_dir);
    cldg::Operators ops = cldg::build_operators(spec, mesh, basis, controls.tau_max);
    cldg::dump_matrix(opt.dump_dir + "/gram_primal_x.txt", ops.gram_p[0], n);
    cldg::dump_matrix(opt.dump_dir + "/gram_dual_x.txt", ops.gram_d[0], n);
  }

  if (study.problem_name == "custom" && study.problem.has_exact &&
      spec.dimension == 1) {
    const double res = cldg::residual_spot_check(study.problem);
    if (res > 0.05)
      std::cerr << "warning: supplied exact solution leaves a relative PDE "
                   "residual of " << res << "\n";
  }

  const cldg::SolverState state = cldg::run(spec, mesh, basis, controls);
  std::printf("N=%d k=%d alpha=%g steps=%zu final_energy=%.6e\n", n, study.k,
              spec.alpha, state.energy_trace.size() - 1, cldg::energy(state));
  if (study.problem.has_exact) {
    double e1, e2;
    if (spec.dimension == 1) {
      auto exact = [&](double x) { return study.problem.exact_u(x, 0.0, spec.T); };
      e1 = cldg::l2_error(state.u1, mesh, std::function<double(double)>(exact));
      e2 = cldg::l2_error(state.u2, mesh, std::function<double(double)>(exact));
    } else {
      auto exact = [&](double x, double y) {
        return study.problem.exact_u(x, y, spec.T);
      };
      e1 = cldg::l2_error(state.u1, mesh, std::function<double(double, double)>(exact));
      e2 = cldg::l2_error(state.u2, mesh, std::function<double(double, double)>(exact));
    }
    std::printf("E1=%.6e E2=%.6e\n", e1, e2);
  }
  if (!study.out_base.empty()) {
    // single runs emit the energy trace instead of a rate table
    std::string csv = "t,energy\n";
    char buf[64];
    for (const auto& [t, e] : state.energy_trace) {
      std::snprintf(buf, sizeof(buf), "%.12e,%.12e\n", t, e);
      csv += buf;
    }
    std::ofstream os(study.out_base + "_energy.csv", std::ios::binary);
    os << csv;
    std::printf("wrote %s_energy.csv\n", study.out_base.c_str());
  }
  return 0;
}

int do_converge(const CliOptions& opt) {
  cldg::StudyConfig study = make_study(opt);
  const cldg::StudyResult result = cldg::run_convergence(study);
  std::printf("%s\n", cldg::rows_to_csv(result.rows).c_str());
  for (const std::string& path : emit_report(study, result))
    std::printf("wrote %s\n", path.c_str());
  for (const cldg::ConvergenceRow& row : result.rows)
    if (row.failed)
      std::fprintf(stderr, "row N=%d failed: %s\n", row.inv_h, row.note.c_str());
  return 0;
}

int do_stability(const CliOptions& opt) {
  cldg::StudyConfig study = make_study(opt);
  const cldg::StabilityResult result = cldg::run_stability(study);
  for (const cldg::StabilityTrace& st : result.traces)
    std::printf("N=%d steps=%zu max_relative_increase=%.3e %s\n", st.inv_h,
                st.trace.size() - 1, st.max_relative_increase,
                st.non_increasing ? "non-increasing" : "INCREASING");
  for (const std::string& path : emit_stability_report(study, result))
    std::printf("wrote %s\n", path.c_str());
  if (!result.non_increasing) {
    std::fprintf(stderr, "stability violation: energy increased\n");
    return 2;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"central LDG solver for space-fractional diffusion"};
  app.require_subcommand(1);
  CliOptions opt;

  CLI::App* cmd_run = app.add_subcommand("run", "single solve on one mesh");
  add_common_flags(cmd_run, opt);
  cmd_run->add_option("--dump-operators", opt.dump_dir,
                      "directory for operator matrix dumps");

  CLI::App* cmd_conv =
      app.add_subcommand("converge", "error/rate study over a mesh list");
  add_common_flags(cmd_conv, opt);

  CLI::App* cmd_stab =
      app.add_subcommand("stability", "zero-source energy monotonicity check");
  add_common_flags(cmd_stab, opt);

  try {
    app.parse(argc, argv);
    if (app.got_subcommand(cmd_run)) return do_run(opt);
    if (app.got_subcommand(cmd_conv)) return do_converge(opt);
    if (app.got_subcommand(cmd_stab)) return do_stability(opt);
    return 1;
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  } catch (const cldg::StabilityViolation& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
