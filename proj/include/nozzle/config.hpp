#pragma once

#include <string>
#include <vector>

#include "nozzle/setup.hpp"
#include "nozzle/shock_solver.hpp"
#include "nozzle/subsonic.hpp"

namespace nozzle {

struct RunConfig {
  GasModel model;
  double p_minus = 1.0, rho_minus = 1.0, mach_minus = 2.0;
  NozzleSpec nozzle;
  bool pe_mid = true;  // "Pe = mid" or absent
  double pe = 0.0;
  int nx = 128, ny = 64, nxi = 0;
  std::string p0 = "zero", theta0 = "zero", q0 = "zero", s0 = "zero";
  double tol_newton = 1e-12, tol_fixed_point = 1e-10, tol_linear = 1e-10;
  double eps = 0.1;
  int max_iters = 50;
  int seeds = 5;
  int polar_samples = 200;
  std::vector<double> sweep_pe;  // scaled positions in the interval, or absolute values
  bool sweep_scaled = true;

  // command-line side
  std::string out_dir = ".";
  bool emit_fields = false;
  bool force = false;

  void validate() const;
  GasState upstream() const;
  InflowPerturbation inflow() const;
  ProblemSetup setup() const;
  double resolved_pe(const ProblemSetup& s) const;
  FixedDomainGrid grid() const;
  SolverOptions solver_options() const;
};

// key = value lines, '#' starts a comment. Relative profile paths resolve
// against the directory of the file.
RunConfig parse_config(const std::string& path);
RunConfig parse_config_text(const std::string& text, const std::string& origin = "<text>",
                            const std::string& base_dir = "");

}  // namespace nozzle
