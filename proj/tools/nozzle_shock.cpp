#include <chrono>
#include <filesystem>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "nozzle/config.hpp"
#include "nozzle/errors.hpp"
#include "nozzle/reports.hpp"

using namespace nozzle;

namespace {

struct Flags {
  std::string config;
  std::string out = ".";
  bool emit_fields = false;
  int seeds = 0;
  bool force = false;
};

RunConfig load(const Flags& fl) {
  RunConfig c = parse_config(fl.config);
  c.out_dir = fl.out;
  c.emit_fields = fl.emit_fields;
  c.force = fl.force;
  if (fl.seeds > 0) c.seeds = fl.seeds;
  std::error_code ec;
  std::filesystem::create_directories(c.out_dir, ec);
  if (ec) fail(ErrorKind::Config, "cannot create output directory '" + c.out_dir + "'");
  return c;
}

std::string out(const RunConfig& c, const std::string& name) {
  return (std::filesystem::path(c.out_dir) / name).string();
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

int cmd_polar(const RunConfig& c) {
  c.validate();
  const GasState um = c.upstream();
  const auto cp = polar_critical_points(c.model, um);
  write_polar_csv(out(c, "polar.csv"), sample_polar(Exec::Parallel, c.model, um, c.polar_samples));
  write_json(out(c, "critical_points.json"), critical_points_json(um, cp));
  std::cout << "p_max=" << cp.p_max << " p_star=" << cp.p_star
            << " theta_star=" << cp.theta_star << " p_sonic=" << cp.p_sonic << "\n";
  return 0;
}

int cmd_background(const RunConfig& c) {
  c.validate();
  const BackgroundShock bg = build_background(c.model, c.upstream());
  write_json(out(c, "background.json"), background_json(bg, c.model));
  std::cout << "kappa=" << bg.kappa << " kappa1=" << bg.kappa1 << " kappa2=" << bg.kappa2 << "\n";
  return 0;
}

int cmd_interval(const RunConfig& c) {
  const ProblemSetup s = c.setup();
  write_json(out(c, "pe_interval.json"), pe_interval_json(s));
  std::cout << "Pe in (" << s.pe.lo << ", " << s.pe.hi << ")\n";
  return 0;
}

int cmd_validate(const RunConfig& c) {
  const ProblemSetup s = c.setup();
  const CompatibilityReport r = validate_compatibility(s.model, s.background, s.inflow, s.sigma());
  write_json(out(c, "compatibility.json"), compatibility_json(r));
  for (const auto& e : r.entries)
    std::cout << (e.pass ? "ok   " : "FAIL ") << e.name << " residual=" << e.residual << "\n";
  // a failed compatibility check is a problem with the input data
  return r.all_pass() ? 0 : 2;
}

int cmd_solve(const RunConfig& c) {
  const ProblemSetup s = c.setup();
  const double pe = c.resolved_pe(s);
  const auto t0 = std::chrono::steady_clock::now();
  SolverOptions o = c.solver_options();
  o.exec = Exec::Parallel;
  const SolveReport r = fixed_point_solve(s, pe, c.grid(), {}, o);
  const double dt = seconds_since(t0);
  write_json(out(c, "report.json"), solve_report_json(s, pe, r, dt));
  write_f_tilde_csv(out(c, "f_tilde.csv"), r.f_tilde_profile);
  if (c.emit_fields) {
    write_fields_csv(out(c, "fields.csv"), s, r);
    if (r.supersonic) write_supersonic_csv(out(c, "supersonic_fields.csv"), *r.supersonic);
  }
  std::cout << "converged in " << r.iterations_run << " iterations, delta_xi="
            << r.front.delta_xi << "\n";
  return 0;
}

int cmd_uniqueness(const RunConfig& c) {
  const ProblemSetup s = c.setup();
  const double pe = c.resolved_pe(s);
  const auto t0 = std::chrono::steady_clock::now();
  SweepOptions sw;
  sw.n_seeds = c.seeds;
  const UniquenessReport u = uniqueness_sweep(s, pe, c.grid(), sw, c.solver_options());
  write_json(out(c, "verdict.json"), verdict_json(s, pe, u, seconds_since(t0)));
  std::cout << "verdict=" << verdict_name(u.verdict) << "\n";
  return u.verdict == Verdict::Unique ? 0 : 3;
}

int cmd_sweep_pe(const RunConfig& c) {
  const ProblemSetup s = c.setup();
  std::vector<PeSweepRow> rows;
  SolverOptions o = c.solver_options();
  o.exec = Exec::Parallel;
  for (double v : c.sweep_pe) {
    PeSweepRow row{};
    row.pe = c.sweep_scaled ? s.pe.lo + v * (s.pe.hi - s.pe.lo) : v;
    row.linear_root = f_tilde_linear_root(s, row.pe);
    try {
      const SolveReport r = fixed_point_solve(s, row.pe, c.grid(), {}, o);
      row.ok = true;
      row.delta_xi = r.front.delta_xi;
      row.iterations = r.iterations_run;
    } catch (const Error& e) {
      row.error_kind = kind_name(e.kind());
    }
    rows.push_back(row);
  }
  write_pe_sweep_csv(out(c, "pe_sweep.csv"), rows);
  for (const auto& r : rows)
    std::cout << "Pe=" << r.pe << " " << (r.ok ? "delta_xi=" + std::to_string(r.delta_xi) : r.error_kind)
              << "\n";
  return 0;
}

std::string pretty(const char* kind) {
  std::string s(kind);
  for (char& ch : s)
    if (ch == '_') ch = '-';
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Transonic shock solver for slightly curved 2-D nozzles"};
  app.require_subcommand(1);
  Flags fl;
  struct Cmd {
    const char* name;
    const char* help;
    int (*run)(const RunConfig&);
  };
  const Cmd cmds[] = {
      {"polar", "sample the shock polar of the upstream state", cmd_polar},
      {"background", "planar background shock and its constants", cmd_background},
      {"interval", "admissible exit-pressure interval", cmd_interval},
      {"validate", "inflow compatibility checks", cmd_validate},
      {"solve", "solve the free boundary problem", cmd_solve},
      {"uniqueness", "multi-seed uniqueness certificate", cmd_uniqueness},
      {"sweep-pe", "shock position across exit pressures", cmd_sweep_pe},
  };
  for (const auto& c : cmds) {
    CLI::App* sub = app.add_subcommand(c.name, c.help);
    sub->add_option("--config", fl.config, "config file")->required();
    sub->add_option("--out", fl.out, "output directory");
    sub->add_flag("--emit-fields", fl.emit_fields, "write field CSVs");
    sub->add_option("--seeds", fl.seeds, "number of uniqueness seeds");
    sub->add_flag("--force", fl.force, "allow sigma above the cap");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  try {
    for (const auto& c : cmds)
      if (app.got_subcommand(c.name)) return c.run(load(fl));
  } catch (const Error& e) {
    std::cerr << "error (" << pretty(kind_name(e.kind())) << "): " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
