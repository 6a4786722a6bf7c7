#include "nozzle/config.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "nozzle/errors.hpp"

namespace nozzle {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void bad(const std::string& where, const std::string& key, const std::string& msg) {
  fail(ErrorKind::Config, where + ": key '" + key + "': " + msg);
}

double to_double(const std::string& v, const std::string& where, const std::string& key) {
  double x = 0.0;
  const char* b = v.data();
  const char* e = b + v.size();
  auto [ptr, ec] = std::from_chars(b, e, x);
  if (ec != std::errc() || ptr != e) bad(where, key, "expected a number, got '" + v + "'");
  return x;
}

int to_int(const std::string& v, const std::string& where, const std::string& key) {
  int x = 0;
  const char* b = v.data();
  const char* e = b + v.size();
  auto [ptr, ec] = std::from_chars(b, e, x);
  if (ec != std::errc() || ptr != e) bad(where, key, "expected an integer, got '" + v + "'");
  return x;
}

bool is_builtin(const std::string& s) {
  return s == "zero" || s.rfind("const:", 0) == 0 || s.rfind("affine:", 0) == 0 ||
         s.rfind("bump:", 0) == 0;
}

std::string resolve_profile(const std::string& v, const std::string& base) {
  if (is_builtin(v) || base.empty()) return v;
  std::filesystem::path p(v);
  if (p.is_absolute()) return v;
  return (std::filesystem::path(base) / p).string();
}

}  // namespace

RunConfig parse_config_text(const std::string& text, const std::string& origin,
                            const std::string& base_dir) {
  RunConfig c;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = origin + ":" + std::to_string(lineno);
    const auto eq = line.find('=');
    if (eq == std::string::npos) fail(ErrorKind::Config, where + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (val.empty()) bad(where, key, "empty value");
    auto num = [&] { return to_double(val, where, key); };
    auto integer = [&] { return to_int(val, where, key); };

    if (key == "gamma") c.model.gamma = num();
    else if (key == "c_v") c.model.c_v = num();
    else if (key == "R") c.model.r_const = num();
    else if (key == "p_minus") c.p_minus = num();
    else if (key == "rho_minus") c.rho_minus = num();
    else if (key == "mach_minus") c.mach_minus = num();
    else if (key == "sigma") c.nozzle.sigma = num();
    else if (key == "sigma_cap") c.nozzle.sigma_cap = num();
    else if (key == "L") c.nozzle.L = num();
    else if (key == "xi0") c.nozzle.xi0 = num();
    else if (key == "Pe") {
      if (val == "mid") {
        c.pe_mid = true;
      } else {
        c.pe_mid = false;
        c.pe = num();
      }
    } else if (key == "grid.nx") c.nx = integer();
    else if (key == "grid.ny") c.ny = integer();
    else if (key == "grid.nxi") c.nxi = integer();
    else if (key == "profiles.p0") c.p0 = resolve_profile(val, base_dir);
    else if (key == "profiles.theta0") c.theta0 = resolve_profile(val, base_dir);
    else if (key == "profiles.q0") c.q0 = resolve_profile(val, base_dir);
    else if (key == "profiles.s0") c.s0 = resolve_profile(val, base_dir);
    else if (key == "tol.newton") c.tol_newton = num();
    else if (key == "tol.fixed_point") c.tol_fixed_point = num();
    else if (key == "tol.linear") c.tol_linear = num();
    else if (key == "eps") c.eps = num();
    else if (key == "max_iters") c.max_iters = integer();
    else if (key == "seeds") c.seeds = integer();
    else if (key == "polar.samples") c.polar_samples = integer();
    else if (key == "sweep.pe" || key == "sweep.pe_scaled") {
      // comma separated list
      c.sweep_scaled = key == "sweep.pe_scaled";
      c.sweep_pe.clear();
      std::istringstream vs(val);
      std::string item;
      while (std::getline(vs, item, ',')) c.sweep_pe.push_back(to_double(trim(item), where, key));
    } else {
      bad(where, key, "unknown key");
    }
  }
  if (c.sweep_pe.empty()) {
    c.sweep_pe = {0.1, 0.3, 0.5, 0.7, 0.9};
    c.sweep_scaled = true;
  }
  return c;
}

RunConfig parse_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) fail(ErrorKind::Config, "cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  const std::string base = std::filesystem::path(path).parent_path().string();
  return parse_config_text(ss.str(), path, base);
}

void RunConfig::validate() const {
  auto need = [](bool ok, const std::string& msg) {
    if (!ok) fail(ErrorKind::Config, msg);
  };
  need(tol_newton > 0 && tol_fixed_point > 0 && tol_linear > 0, "tolerances must be > 0");
  need(nx >= 8 && ny >= 8, "grid.nx and grid.ny must be >= 8");
  need(nxi == 0 || nxi >= 8, "grid.nxi must be 0 (automatic) or >= 8");
  need(max_iters > 0, "max_iters must be > 0");
  need(seeds > 0, "seeds must be > 0");
  need(polar_samples >= 2, "polar.samples must be >= 2");
  need(eps > 0 && eps < 1, "eps must lie in (0, 1)");
  nozzle.validate(force);
}

GasState RunConfig::upstream() const {
  return upstream_state(model, p_minus, rho_minus, mach_minus);
}

InflowPerturbation RunConfig::inflow() const {
  return {Profile::parse(p0), Profile::parse(theta0), Profile::parse(q0), Profile::parse(s0)};
}

ProblemSetup RunConfig::setup() const {
  validate();
  return build_problem(model, upstream(), nozzle, inflow(), SetupOptions{force});
}

double RunConfig::resolved_pe(const ProblemSetup& s) const { return pe_mid ? s.pe.mid() : pe; }

FixedDomainGrid RunConfig::grid() const {
  FixedDomainGrid g;
  g.nx = nx;
  g.ny = ny;
  return g;
}

SolverOptions RunConfig::solver_options() const {
  SolverOptions o;
  o.tol_fixed_point = tol_fixed_point;
  o.tol_newton = tol_newton;
  o.tol_linear = tol_linear;
  o.max_iters = max_iters;
  o.eps_hyp = eps;
  o.march_steps = nxi;
  return o;
}

}  // namespace nozzle
