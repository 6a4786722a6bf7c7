#include "nozzle/reports.hpp"

#include <cstdio>
#include <fstream>

#include "nozzle/errors.hpp"

namespace nozzle {

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path);
  if (!f) fail(ErrorKind::Config, "cannot write '" + path + "'");
  return f;
}

// fixed 17 significant digits so files diff cleanly between runs
std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

Json state_json(const GasState& u) {
  return Json{{"p", u.p}, {"theta", u.theta}, {"q", u.q}, {"s", u.s}};
}

Json location_json(const NodeLocation& n) {
  return Json{{"i", n.i}, {"j", n.j}, {"xi", n.xi}, {"eta", n.eta}};
}

}  // namespace

Json critical_points_json(const GasState& u_minus, const PolarCriticalPoints& cp) {
  return Json{{"upstream", state_json(u_minus)},
              {"p_max", cp.p_max},
              {"p_star", cp.p_star},
              {"theta_star", cp.theta_star},
              {"theta_star_deg", cp.theta_star * 180.0 / 3.14159265358979323846},
              {"p_sonic", cp.p_sonic},
              {"theta_sonic", cp.theta_sonic},
              {"p_sonic_above_p_star", cp.p_sonic > cp.p_star}};
}

Json background_json(const BackgroundShock& bg, const GasModel& model) {
  return Json{{"gas", {{"gamma", model.gamma}, {"c_v", model.c_v}, {"R", model.r_const}}},
              {"upstream", state_json(bg.u_minus_bar)},
              {"downstream", state_json(bg.u_plus_bar)},
              {"rho_minus", bg.rho_minus},
              {"rho_plus", bg.rho_plus},
              {"c_minus", bg.c_minus},
              {"c_plus", bg.c_plus},
              {"mach2_minus", bg.mach2_minus},
              {"mach2_plus", bg.mach2_plus},
              {"p_jump", bg.p_jump},
              {"kappa", bg.kappa},
              {"kappa1", bg.kappa1},
              {"kappa2", bg.kappa2},
              {"polar", critical_points_json(bg.u_minus_bar, bg.polar)}};
}

Json pe_interval_json(const ProblemSetup& s) {
  const PeInterval& p = s.pe;
  return Json{{"sigma", s.sigma()},
              {"L", s.nozzle.L},
              {"xi0", s.nozzle.xi0},
              {"eta0", s.eta0()},
              {"prefactor", p.prefactor},
              {"g_script", p.g_script},
              {"g_script_literal", p.g_script_literal},
              {"scaled_lo", p.scaled_lo},
              {"scaled_hi", p.scaled_hi},
              {"lo", p.lo},
              {"hi", p.hi},
              {"mid", p.mid()}};
}

Json compatibility_json(const CompatibilityReport& r) {
  Json e = Json::array();
  for (const auto& c : r.entries)
    e.push_back({{"name", c.name},
                 {"pass", c.pass},
                 {"residual", c.residual},
                 {"tolerance", c.tolerance},
                 {"note", c.note}});
  return Json{{"all_pass", r.all_pass()},
              {"derivative_conditions_pass", r.derivative_conditions_pass()},
              {"entries", e}};
}

Json hypotheses_json(const HypothesisReport& h) {
  return Json{{"eps", h.eps},
              {"pass", h.pass()},
              {"mach_ok", h.mach_ok},
              {"u_ok", h.u_ok},
              {"pressure_ok", h.pressure_ok},
              {"max_mach2", h.max_mach2},
              {"min_u", h.min_u},
              {"min_pressure_margin", h.min_pressure_margin},
              {"p_star_bar", h.p_star_bar},
              {"worst_mach", location_json(h.worst_mach)},
              {"worst_u", location_json(h.worst_u)},
              {"worst_pressure", location_json(h.worst_pressure)}};
}

Json solve_report_json(const ProblemSetup& s, double pe, const SolveReport& r,
                       double timing_seconds) {
  Json it = Json::array();
  for (const auto& k : r.iterations)
    it.push_back({{"k", k.k},
                  {"delta_xi", k.delta_xi},
                  {"change", k.change},
                  {"change_fields", k.change_fields},
                  {"change_slope", k.change_slope},
                  {"change_delta_xi", k.change_delta_xi},
                  {"ratio", k.ratio},
                  {"linear_residual", k.linear_residual}});
  const SolveDiagnostics& d = r.diag;
  Json front{{"delta_xi", r.front.delta_xi},
             {"xi_star", r.front.xi_star},
             {"psi_bottom", r.front.position.empty() ? 0.0 : r.front.position.front()},
             {"sup_slope", d.sup_slope}};
  Json diag{{"rh_residual_max", d.rh_residual_max},
            {"max_ds_dxi", d.max_ds_dxi},
            {"max_dB_dxi", d.max_dB_dxi},
            {"loop_mismatch", d.loop_mismatch},
            {"shock_pressure_mismatch", d.shock_pressure_mismatch},
            {"trace_relation_remainder_over_sigma2", d.gammasp_remainder},
            {"rh_expansion_remainder_over_sigma2", d.g_literal_max},
            {"mass_balance_residual", d.pl0_residual},
            {"f_tilde_slope", d.f_tilde_slope},
            {"minus_kappa", -s.background.kappa},
            {"linear_root", d.linear_root},
            {"supersonic_passes", d.supersonic_passes},
            {"supersonic_pass_changes", d.supersonic_pass_changes},
            {"march_steps", d.march_steps},
            {"sup_theta", d.sup_theta},
            {"sup_dp", d.sup_dp},
            {"tail_ratio", d.tail_ratio},
            {"max_step_ratio", d.max_step_ratio}};
  return Json{{"pe", pe},
              {"sigma", s.sigma()},
              {"grid", {{"nx", r.fields.grid.nx}, {"ny", r.fields.grid.ny}}},
              {"converged", r.converged},
              {"iterations_run", r.iterations_run},
              {"front", front},
              {"hypotheses", hypotheses_json(r.hypotheses)},
              {"diagnostics", diag},
              {"iterations", it},
              {"timing_seconds_nondeterministic", timing_seconds}};
}

Json verdict_json(const ProblemSetup& s, double pe, const UniquenessReport& u,
                  double timing_seconds) {
  Json seeds = Json::array();
  for (const auto& r : u.seeds) {
    Json e{{"index", r.index},
           {"psi_prime0", r.psi_prime0},
           {"delta_xi0", r.delta_xi0},
           {"ok", r.ok}};
    if (r.ok) {
      e["delta_xi"] = r.delta_xi;
      e["iterations"] = r.iterations;
      e["tail_ratio"] = r.tail_ratio;
    } else {
      e["error_kind"] = r.error_kind;
      e["error"] = r.error;
    }
    seeds.push_back(e);
  }
  return Json{{"verdict", verdict_name(u.verdict)},
              {"pe", pe},
              {"sigma", s.sigma()},
              {"delta_xi_spread", u.delta_xi_spread},
              {"field_spread", u.field_spread},
              {"scan_points", u.scan.delta_xi.size()},
              {"scan_sign_changes", u.scan_sign_changes},
              {"scan_ascending_pairs", u.scan_ascending_pairs},
              {"note", u.note},
              {"seeds", seeds},
              {"timing_seconds_nondeterministic", timing_seconds}};
}

void write_json(const std::string& path, const Json& j) {
  auto f = open_out(path);
  f << j.dump(2) << "\n";
}

void write_polar_csv(const std::string& path, const std::vector<PolarSample>& samples) {
  auto f = open_out(path);
  f << "theta_rad,p,M_down,branch\n";
  for (const auto& s : samples)
    f << num(s.theta) << "," << num(s.p) << "," << num(s.mach_down) << ","
      << (s.branch == PolarBranch::Upper ? "upper" : "lower") << "\n";
}

void write_fields_csv(const std::string& path, const ProblemSetup& s, const SolveReport& r) {
  auto f = open_out(path);
  const FixedDomainGrid& g = r.fields.grid;
  const double L = s.nozzle.L, xi0 = s.nozzle.xi0;
  f << "xi,eta,p,theta,q,s,M\n";
  for (int j = 0; j <= g.ny; ++j) {
    const double psi = r.front.position.empty() ? xi0 : r.front.position[j];
    for (int i = 0; i <= g.nx; ++i) {
      const GasState u = r.fields.at(i, j);
      const double xi = psi + (g.X(i) - xi0) * (L - psi) / (L - xi0);
      f << num(xi) << "," << num(g.Y(j)) << "," << num(u.p) << "," << num(u.theta) << ","
        << num(u.q) << "," << num(u.s) << "," << num(std::sqrt(mach_squared(s.model, u)))
        << "\n";
    }
  }
}

void write_supersonic_csv(const std::string& path, const SupersonicField& fld) {
  auto f = open_out(path);
  f << "xi,eta,dp,dtheta,dq,ds\n";
  const MarchGrid& g = fld.grid;
  for (int i = 0; i <= g.nxi; ++i)
    for (int j = 0; j <= g.ny; ++j) {
      const int n = fld.idx(i, j);
      f << num(i * g.dxi()) << "," << num(j * g.deta()) << "," << num(fld.dp[n]) << ","
        << num(fld.dtheta[n]) << "," << num(fld.dq[n]) << "," << num(fld.ds[n]) << "\n";
    }
}

void write_f_tilde_csv(const std::string& path, const FTildeScan& scan) {
  auto f = open_out(path);
  f << "delta_xi,f_tilde\n";
  for (size_t k = 0; k < scan.delta_xi.size(); ++k)
    f << num(scan.delta_xi[k]) << "," << num(scan.value[k]) << "\n";
}

void write_pe_sweep_csv(const std::string& path, const std::vector<PeSweepRow>& rows) {
  auto f = open_out(path);
  f << "pe,linear_root,ok,delta_xi,iterations,error_kind\n";
  for (const auto& r : rows)
    f << num(r.pe) << "," << num(r.linear_root) << "," << (r.ok ? 1 : 0) << ","
      << (r.ok ? num(r.delta_xi) : "") << "," << r.iterations << "," << r.error_kind << "\n";
}

}  // namespace nozzle
