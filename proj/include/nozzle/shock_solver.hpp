#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nozzle/setup.hpp"
#include "nozzle/subsonic.hpp"
#include "nozzle/supersonic.hpp"

namespace nozzle {

struct ShockFront {
  double delta_xi = 0.0;
  double xi_star = 0.0;
  std::vector<double> slope;     // psi'(eta_j)
  std::vector<double> position;  // psi(eta_j)
};

// psi(eta) = xi_star - int_eta^eta0 psi', trapezoid on the eta grid.
ShockFront make_front(double xi0, double delta_xi, const std::vector<double>& slope,
                      double eta0);

// Everything the solvability function needs. Without feedback the reduced
// linear form is evaluated.
struct SolvabilityContext {
  const ProblemSetup* setup = nullptr;
  double pe = 0.0;
  // set for the corrected form
  const SupersonicField* supersonic = nullptr;
  std::vector<double> theta_shock;  // downstream angle on the shock, per j
  std::vector<double> slope;        // psi' per j
  double feedback = 0.0;            // subsonic feedback constant
  bool corrected() const { return supersonic != nullptr; }
};

double f_tilde_linear(const ProblemSetup& setup, double pe, double delta_xi);

// Closed-form root of the linear form.
double f_tilde_linear_root(const ProblemSetup& setup, double pe);

double solvability_f_tilde(const SolvabilityContext& ctx, double delta_xi);

struct LocateResult {
  double delta_xi;
  int sign_changes;
  int evaluations;
};

LocateResult locate_shock(const SolvabilityContext& ctx, int n_scan = 64,
                          Exec ex = Exec::Serial);

struct FTildeScan {
  std::vector<double> delta_xi, value;
  int sign_changes = 0;
  int ascending_pairs = 0;
};

FTildeScan scan_f_tilde(const SolvabilityContext& ctx, int n, Exec ex = Exec::Serial);

// psi' = [v]/[p] pointwise.
std::vector<double> update_front_slope(const GasModel& model,
                                       const std::vector<GasState>& u_plus_trace,
                                       const std::vector<GasState>& u_minus_trace,
                                       double p_jump_floor);

struct SolverOptions {
  double tol_fixed_point = 1e-10;
  int max_iters = 50;
  double eps_hyp = 0.1;
  double tol_newton = 1e-12;
  double tol_linear = 1e-10;
  bool supersonic_corrections = true;
  bool relocate_shock = true;  // false freezes delta_xi (diagnostic mode)
  int scan_points = 64;
  int profile_points = 256;
  double slope_cap_factor = 10.0;
  int march_steps = 0;  // 0 picks max(CFL-limited count, 4 nx per length L)
  Exec exec = Exec::Serial;
};

struct InitialGuess {
  std::optional<double> delta_xi;
  double psi_prime = 0.0;
  std::optional<FieldSet> fields;
};

struct IterationRecord {
  int k;
  double delta_xi;
  double change_fields, change_slope, change_delta_xi, change;
  double ratio;  // change / previous change, 0 for the first
  double linear_residual;
};

struct SolveDiagnostics {
  double rh_residual_max = 0.0;
  double max_ds_dxi = 0.0, max_dB_dxi = 0.0;
  double loop_mismatch = 0.0;
  double shock_pressure_mismatch = 0.0;  // mean of p_RH - p on the shock
  double gammasp_remainder = 0.0;        // sup |R| / sigma^2
  double g_literal_max = 0.0;            // sup |g1|,|g2|,|g3| / sigma^2
  double pl0_residual = 0.0;
  double f_tilde_slope = 0.0;            // central difference at the root
  double linear_root = 0.0;
  int supersonic_passes = 0;
  std::vector<double> supersonic_pass_changes;
  int march_steps = 0;
  double sup_theta = 0.0, sup_dp = 0.0, sup_slope = 0.0;
  double tail_ratio = 0.0;      // two-step geometric mean, largest in the tail
  double max_step_ratio = 0.0;  // largest single-step ratio in the tail
};

struct SolveReport {
  bool converged = false;
  int iterations_run = 0;
  FieldSet fields;
  ShockFront front;
  std::vector<GasState> shock_trace;  // downstream states on the shock
  std::vector<GasState> upstream_trace;
  std::vector<IterationRecord> iterations;
  std::vector<double> contraction_ratios;
  HypothesisReport hypotheses;
  FTildeScan f_tilde_profile;
  SolveDiagnostics diag;
  std::optional<SupersonicField> supersonic;
};

SolveReport fixed_point_solve(const ProblemSetup& setup, double pe,
                              const FixedDomainGrid& grid_shape,
                              const InitialGuess& init = {},
                              const SolverOptions& opts = {});

enum class Verdict { Unique, MultipleRoots, SeedDisagreement, RegimeBreach };

const char* verdict_name(Verdict v);

struct SeedResult {
  int index;
  double psi_prime0, delta_xi0;
  bool ok = false;
  std::string error_kind, error;
  double delta_xi = 0.0;
  int iterations = 0;
  double tail_ratio = 0.0;
  SolveReport report;
};

struct UniquenessReport {
  Verdict verdict;
  std::vector<SeedResult> seeds;
  double delta_xi_spread = 0.0;
  double field_spread = 0.0;
  int scan_sign_changes = 0;
  int scan_ascending_pairs = 0;
  FTildeScan scan;
  std::string note;
};

struct SweepOptions {
  int n_seeds = 5;
  // per-seed frozen delta_xi (diagnostic mode); empty means relocate
  std::vector<double> frozen_delta_xi;
};

UniquenessReport uniqueness_sweep(const ProblemSetup& setup, double pe,
                                  const FixedDomainGrid& grid_shape,
                                  const SweepOptions& sweep = {},
                                  const SolverOptions& opts = {});

}  // namespace nozzle
