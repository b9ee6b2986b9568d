#include "cldg/problems.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "cldg/expr.hpp"

namespace cldg {

namespace {

// x^3 (1-x)^3 = x^3 - 3x^4 + 3x^5 - x^6
const double kBridgeCoeff[4] = {1.0, -3.0, 3.0, -1.0};

double bump(double u) { return u * u * u * (1.0 - u) * (1.0 - u) * (1.0 - u); }

std::vector<double> bump_poly(double scale) {
  return {0.0, 0.0, 0.0, scale, -3.0 * scale, 3.0 * scale, -scale};
}

}  // namespace

double bridge_frac_deriv(const FractionalExponent& alpha, Side side, double x) {
  if (x < 0.0 || x > 1.0)
    throw std::domain_error("bridge_frac_deriv: x must lie in [0,1]");
  const double a = alpha.value();
  const double u = (side == Side::left) ? x : 1.0 - x;
  double v = 0.0;
  for (int m = 3; m <= 6; ++m)
    v += kBridgeCoeff[m - 3] * power_rule_factor(m, a) * std::pow(u, m - a);
  return v;
}

std::vector<SourceProfile1D::PowerTerm> bridge_power_terms(
    const FractionalExponent& alpha) {
  const double a = alpha.value();
  std::vector<SourceProfile1D::PowerTerm> terms;
  for (int m = 3; m <= 6; ++m) {
    const double c = kBridgeCoeff[m - 3] * power_rule_factor(m, a);
    terms.push_back({Side::left, m - a, c});
    terms.push_back({Side::right, m - a, c});
  }
  return terms;
}

ManufacturedProblem example1(const FractionalExponent& alpha) {
  ManufacturedProblem mp;
  mp.spec.dimension = 1;
  mp.spec.alpha = alpha.value();
  mp.spec.beta = alpha.value();
  mp.spec.d1 = mp.spec.d2 = 1.0;
  mp.spec.T = 0.1;
  mp.spec.g = [](double x, double) { return bump(x); };

  SeparableSource src;
  src.time_factor = [](double t) { return std::exp(2.0 * t); };
  SeparableSource::Term term;
  term.x.poly = bump_poly(2.0);
  for (SourceProfile1D::PowerTerm p : bridge_power_terms(alpha)) {
    p.coeff = -p.coeff;
    term.x.powers.push_back(p);
  }
  term.y.poly = {1.0};
  src.terms.push_back(term);
  mp.spec.separable_f = src;
  mp.spec.f = [src](double x, double y, double t) { return src.value(x, y, t, 1); };

  mp.exact_u = [](double x, double, double t) { return std::exp(2.0 * t) * bump(x); };
  mp.has_exact = true;
  return mp;
}

ManufacturedProblem example2(const FractionalExponent& alpha,
                             const FractionalExponent& beta) {
  ManufacturedProblem mp;
  mp.spec.dimension = 2;
  mp.spec.alpha = alpha.value();
  mp.spec.beta = beta.value();
  mp.spec.d1 = -1.0 / (2.0 * std::cos(alpha.value() * M_PI / 2.0));
  mp.spec.d2 = -1.0 / (2.0 * std::cos(beta.value() * M_PI / 2.0));
  mp.spec.T = 0.1;
  mp.spec.g = [](double x, double y) { return 1000.0 * bump(x) * bump(y); };

  SeparableSource src;
  src.time_factor = [](double t) { return std::exp(t); };
  {
    SeparableSource::Term term;  // time derivative part
    term.x.poly = bump_poly(1000.0);
    term.y.poly = bump_poly(1.0);
    src.terms.push_back(term);
  }
  {
    SeparableSource::Term term;  // x-direction fractional part
    for (SourceProfile1D::PowerTerm p : bridge_power_terms(alpha)) {
      p.coeff *= -1000.0 * mp.spec.d1;
      term.x.powers.push_back(p);
    }
    term.y.poly = bump_poly(1.0);
    src.terms.push_back(term);
  }
  {
    SeparableSource::Term term;  // y-direction fractional part
    term.x.poly = bump_poly(-1000.0 * mp.spec.d2);
    term.y.powers = bridge_power_terms(beta);
    src.terms.push_back(term);
  }
  mp.spec.separable_f = src;
  mp.spec.f = [src](double x, double y, double t) { return src.value(x, y, t, 2); };

  mp.exact_u = [](double x, double y, double t) {
    return 1000.0 * std::exp(t) * bump(x) * bump(y);
  };
  mp.has_exact = true;
  return mp;
}

namespace {

double get_num(const std::map<std::string, std::string>& cfg, const std::string& key,
               std::optional<double> fallback = std::nullopt) {
  auto it = cfg.find(key);
  if (it == cfg.end()) {
    if (fallback) return *fallback;
    throw std::invalid_argument("config: missing key '" + key + "'");
  }
  try {
    size_t used = 0;
    const double v = std::stod(it->second, &used);
    if (used != it->second.size()) throw std::invalid_argument("");
    return v;
  } catch (...) {
    throw std::invalid_argument("config: key '" + key + "' is not a number");
  }
}

std::function<double(double, double)> table_interpolant(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open table file " + path);
  std::vector<double> xs, vs;
  double x, v;
  while (in >> x >> v) {
    xs.push_back(x);
    vs.push_back(v);
  }
  if (xs.size() < 2)
    throw std::invalid_argument("config: table file needs at least two samples");
  return [xs, vs](double q, double) {
    if (q <= xs.front()) return vs.front();
    if (q >= xs.back()) return vs.back();
    size_t i = 1;
    while (xs[i] < q) ++i;
    const double w = (q - xs[i - 1]) / (xs[i] - xs[i - 1]);
    return (1.0 - w) * vs[i - 1] + w * vs[i];
  };
}

}  // namespace

ManufacturedProblem custom_problem(const std::map<std::string, std::string>& config) {
  auto it = config.find("problem");
  const std::string which = (it == config.end()) ? "custom" : it->second;
  if (which == "example1") {
    return example1(FractionalExponent::diffusion_order(get_num(config, "alpha")));
  }
  if (which == "example2") {
    const double a = get_num(config, "alpha");
    return example2(FractionalExponent::diffusion_order(a),
                    FractionalExponent::diffusion_order(get_num(config, "beta", a)));
  }
  if (which != "custom")
    throw std::invalid_argument("config: problem must be example1, example2 or custom");

  ManufacturedProblem mp;
  mp.spec.dimension = static_cast<int>(get_num(config, "dimension", 1.0));
  mp.spec.alpha = get_num(config, "alpha");
  FractionalExponent::diffusion_order(mp.spec.alpha);
  mp.spec.beta = get_num(config, "beta", mp.spec.alpha);
  if (mp.spec.dimension == 2) FractionalExponent::diffusion_order(mp.spec.beta);
  const double d = get_num(config, "d", 1.0);
  mp.spec.d1 = get_num(config, "d1", d);
  mp.spec.d2 = get_num(config, "d2", d);
  mp.spec.T = get_num(config, "T", 0.1);

  if (config.count("g_table")) {
    mp.spec.g = table_interpolant(config.at("g_table"));
  } else if (config.count("g")) {
    Expression ge = Expression::parse(config.at("g"));
    mp.spec.g = [ge](double x, double y) { return ge(x, y, 0.0); };
  } else {
    throw std::invalid_argument("config: custom problem needs g or g_table");
  }
  if (config.count("f")) {
    Expression fe = Expression::parse(config.at("f"));
    mp.spec.f = [fe](double x, double y, double t) { return fe(x, y, t); };
  } else {
    mp.spec.f = [](double, double, double) { return 0.0; };
  }
  if (config.count("u")) {
    Expression ue = Expression::parse(config.at("u"));
    mp.exact_u = [ue](double x, double y, double t) { return ue(x, y, t); };
    mp.has_exact = true;
  }
  mp.spec.validate();
  return mp;
}

std::map<std::string, std::string> parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file " + path);
  std::map<std::string, std::string> cfg;
  std::string line;
  while (std::getline(in, line)) {
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    const size_t eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return (b == std::string::npos) ? std::string() : s.substr(b, e - b + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!key.empty()) cfg[key] = value;
  }
  return cfg;
}

double residual_spot_check(const ManufacturedProblem& problem, int grid_n, double t) {
  if (!problem.has_exact)
    throw std::invalid_argument("residual_spot_check: problem has no exact solution");
  if (problem.spec.dimension != 1)
    throw std::invalid_argument("residual_spot_check: 1D only");
  const double h = 1.0 / grid_n;
  std::vector<double> samples(grid_n + 1);
  for (int i = 0; i <= grid_n; ++i)
    samples[i] = problem.exact_u(i * h, 0.0, t);
  const auto a = FractionalExponent::unit_interval(problem.spec.alpha - 1.0);
  // order-alpha derivative as the order-(alpha-1) derivative of du/dx
  std::vector<double> dudx(grid_n + 1);
  for (int i = 0; i <= grid_n; ++i) {
    const double xp = std::min(1.0, i * h + h), xm = std::max(0.0, i * h - h);
    dudx[i] = (problem.exact_u(xp, 0.0, t) - problem.exact_u(xm, 0.0, t)) / (xp - xm);
  }
  const auto dl = gl_fractional_derivative(dudx, a, h, Side::left);
  const auto dr_in = [&] {
    std::vector<double> neg(dudx.size());
    for (size_t i = 0; i < dudx.size(); ++i) neg[i] = -dudx[i];
    return neg;
  }();
  const auto dr = gl_fractional_derivative(dr_in, a, h, Side::right);
  const double dt = 1e-5;
  double worst = 0.0, scale = 1.0;
  for (int i = grid_n / 8; i <= 7 * grid_n / 8; i += grid_n / 16) {
    const double x = i * h;
    const double ut = (problem.exact_u(x, 0.0, t + dt) -
                       problem.exact_u(x, 0.0, t - dt)) / (2.0 * dt);
    const double f = problem.spec.f(x, 0.0, t);
    const double res = ut - problem.spec.d1 * (dl[i] + dr[i]) - f;
    worst = std::max(worst, std::fabs(res));
    scale = std::max(scale, std::fabs(f));
  }
  return worst / scale;
}

}  // namespace cldg
