#include "cldg/study.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>

#include <json.hpp>

namespace cldg {

namespace {

double now_sec() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

std::string fmt(const char* format, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), format, v);
  return buf;
}

}  // namespace

TimeStepPolicy TimeStepPolicy::defaults(int k, int dimension) {
  TimeStepPolicy p;
  if (k >= 2) {
    p.tau_max_coeff = 0.005;
    p.tau_ratio = 0.01;
  } else if (dimension == 2) {
    p.tau_max_coeff = 0.02;
    p.tau_ratio = 0.1;
  } else {
    p.tau_max_coeff = 0.1;
    p.tau_ratio = 0.1;
  }
  return p;
}

TimeControls TimeStepPolicy::resolve(double h, double alpha, double beta,
                                     int dimension) const {
  // with anisotropic orders the CFL scale uses the smaller exponent
  const double expo = (dimension == 2) ? std::min(alpha, beta) : alpha;
  TimeControls c;
  c.tau_max = tau_max_coeff * std::pow(h, expo);
  c.tau = tau_ratio * c.tau_max;
  c.integrator = integrator;
  c.validate();
  return c;
}

void StudyConfig::validate() const {
  if (cells.empty()) throw std::invalid_argument("study: empty mesh list");
  for (size_t i = 0; i < cells.size(); ++i) {
    if (cells[i] < 2) throw std::invalid_argument("study: all N must be >= 2");
    if (i > 0 && cells[i] <= cells[i - 1])
      throw std::invalid_argument("study: mesh list must be strictly increasing");
  }
  if (k < 0) throw std::invalid_argument("study: k must be >= 0");
  if (format != "csv" && format != "json" && format != "both")
    throw std::invalid_argument("study: format must be csv, json or both");
}

TimeStepPolicy StudyConfig::policy() const {
  TimeStepPolicy p = TimeStepPolicy::defaults(k, problem.spec.dimension);
  if (tau_max_coeff) p.tau_max_coeff = *tau_max_coeff;
  if (tau_ratio) p.tau_ratio = *tau_ratio;
  p.integrator = integrator;
  return p;
}

double eoc(double err_coarse, double err_fine, int inv_h_coarse, int inv_h_fine) {
  return std::log(err_coarse / err_fine) /
         std::log(static_cast<double>(inv_h_fine) / inv_h_coarse);
}

StudyResult run_convergence(const StudyConfig& config) {
  config.validate();
  if (!config.problem.has_exact)
    throw std::invalid_argument("convergence study needs an exact solution");
  ProblemSpec spec = config.problem.spec;
  if (config.T_override) spec.T = *config.T_override;
  const TimeStepPolicy policy = config.policy();
  const BasisSpec basis{config.k};

  StudyResult result;
  const double t0 = now_sec();
  for (int n : config.cells) {
    ConvergenceRow row;
    row.inv_h = n;
    const OverlappingMesh mesh = build_mesh(spec.dimension, n);
    const TimeControls controls =
        policy.resolve(mesh.h, spec.alpha, spec.beta, spec.dimension);
    try {
      const SolverState state = run(spec, mesh, basis, controls);
      const double T = spec.T;
      if (spec.dimension == 1) {
        auto exact = [&](double x) { return config.problem.exact_u(x, 0.0, T); };
        row.E1 = l2_error(state.u1, mesh, std::function<double(double)>(exact));
        row.E2 = l2_error(state.u2, mesh, std::function<double(double)>(exact));
      } else {
        auto exact = [&](double x, double y) { return config.problem.exact_u(x, y, T); };
        row.E1 = l2_error(state.u1, mesh, std::function<double(double, double)>(exact));
        row.E2 = l2_error(state.u2, mesh, std::function<double(double, double)>(exact));
      }
    } catch (const StabilityViolation& e) {
      row.failed = true;
      row.note = e.what();
      row.E1 = row.E2 = std::numeric_limits<double>::quiet_NaN();
    }
    if (!result.rows.empty() && !row.failed && !result.rows.back().failed) {
      const ConvergenceRow& prev = result.rows.back();
      row.rate1 = eoc(prev.E1, row.E1, prev.inv_h, row.inv_h);
      row.rate2 = eoc(prev.E2, row.E2, prev.inv_h, row.inv_h);
    }
    result.rows.push_back(std::move(row));
  }
  result.wall_time_sec = now_sec() - t0;
  return result;
}

StabilityResult run_stability(const StudyConfig& config) {
  config.validate();
  ProblemSpec spec = config.problem.spec;
  // the stability monitor runs with the source forced to zero
  SeparableSource zero;
  zero.time_factor = [](double) { return 0.0; };
  SeparableSource::Term term;
  term.x.poly = {0.0};
  term.y.poly = {0.0};
  zero.terms.push_back(term);
  spec.separable_f = zero;
  spec.f = [](double, double, double) { return 0.0; };
  if (config.T_override) spec.T = *config.T_override;

  const TimeStepPolicy policy = config.policy();
  const BasisSpec basis{config.k};

  StabilityResult result;
  const double t0 = now_sec();
  for (int n : config.cells) {
    const OverlappingMesh mesh = build_mesh(spec.dimension, n);
    const TimeControls controls =
        policy.resolve(mesh.h, spec.alpha, spec.beta, spec.dimension);
    ProblemSpec local = spec;
    if (config.max_steps)
      local.T = std::min(local.T, *config.max_steps * controls.tau);
    StabilityTrace st;
    st.inv_h = n;
    const SolverState state = run(local, mesh, basis, controls);
    st.trace = state.energy_trace;
    for (size_t i = 1; i < st.trace.size(); ++i) {
      const double prev = st.trace[i - 1].second;
      const double inc = st.trace[i].second - prev;
      const double rel = (prev > 0.0) ? inc / prev : inc;
      if (rel > st.max_relative_increase) st.max_relative_increase = rel;
    }
    st.non_increasing = st.max_relative_increase <= 1e-12;
    result.max_relative_increase =
        std::max(result.max_relative_increase, st.max_relative_increase);
    result.non_increasing = result.non_increasing && st.non_increasing;
    result.traces.push_back(std::move(st));
  }
  result.wall_time_sec = now_sec() - t0;
  return result;
}

std::string rows_to_csv(const std::vector<ConvergenceRow>& rows) {
  std::string out = "inv_h,E1,rate1,E2,rate2\n";
  for (const ConvergenceRow& r : rows) {
    out += std::to_string(r.inv_h);
    out += ',' + fmt("%.6e", r.E1);
    out += ',' + (std::isnan(r.rate1) ? std::string() : fmt("%.4f", r.rate1));
    out += ',' + fmt("%.6e", r.E2);
    out += ',' + (std::isnan(r.rate2) ? std::string() : fmt("%.4f", r.rate2));
    out += '\n';
  }
  return out;
}

namespace {

nlohmann::json study_metadata(const StudyConfig& config, double wall_sec) {
  const TimeStepPolicy policy = config.policy();
  nlohmann::json meta;
  meta["problem"] = config.problem_name;
  meta["dimension"] = config.problem.spec.dimension;
  meta["alpha"] = config.problem.spec.alpha;
  meta["beta"] = config.problem.spec.beta;
  meta["k"] = config.k;
  meta["tau_max_coeff"] = policy.tau_max_coeff;
  meta["tau_ratio"] = policy.tau_ratio;
  meta["integrator"] =
      (config.integrator == Integrator::ssp_rk3) ? "ssp_rk3" : "forward_euler";
  meta["seed"] = config.seed;
  meta["wall_time_sec"] = wall_sec;
  return meta;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path);
  os << content;
}

}  // namespace

std::vector<std::string> emit_report(const StudyConfig& config,
                                     const StudyResult& result) {
  std::vector<std::string> written;
  if (config.out_base.empty()) return written;
  if (config.format == "csv" || config.format == "both") {
    const std::string path = config.out_base + ".csv";
    write_file(path, rows_to_csv(result.rows));
    written.push_back(path);
  }
  if (config.format == "json" || config.format == "both") {
    nlohmann::json doc;
    doc["study"] = study_metadata(config, result.wall_time_sec);
    doc["rows"] = nlohmann::json::array();
    for (const ConvergenceRow& r : result.rows) {
      nlohmann::json jr;
      jr["inv_h"] = r.inv_h;
      jr["E1"] = r.E1;
      jr["E2"] = r.E2;
      if (std::isnan(r.rate1)) jr["rate1"] = nullptr; else jr["rate1"] = r.rate1;
      if (std::isnan(r.rate2)) jr["rate2"] = nullptr; else jr["rate2"] = r.rate2;
      jr["failed"] = r.failed;
      if (!r.note.empty()) jr["note"] = r.note;
      doc["rows"].push_back(jr);
    }
    const std::string path = config.out_base + ".json";
    write_file(path, doc.dump(2) + "\n");
    written.push_back(path);
  }
  return written;
}

std::vector<std::string> emit_stability_report(const StudyConfig& config,
                                               const StabilityResult& result) {
  std::vector<std::string> written;
  if (config.out_base.empty()) return written;
  for (const StabilityTrace& st : result.traces) {
    std::string csv = "t,energy\n";
    for (const auto& [t, e] : st.trace)
      csv += fmt("%.12e", t) + ',' + fmt("%.12e", e) + '\n';
    const std::string path =
        config.out_base + "_N" + std::to_string(st.inv_h) + ".csv";
    write_file(path, csv);
    written.push_back(path);
  }
  nlohmann::json doc;
  doc["study"] = study_metadata(config, result.wall_time_sec);
  doc["non_increasing"] = result.non_increasing;
  doc["max_relative_increase"] = result.max_relative_increase;
  const std::string path = config.out_base + "_verdict.json";
  write_file(path, doc.dump(2) + "\n");
  written.push_back(path);
  return written;
}

}  // namespace cldg
