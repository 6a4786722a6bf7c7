#pragma once

#include <functional>
#include <string>
#include <vector>

#include "nozzle/gas.hpp"
#include "nozzle/profiles.hpp"
#include "nozzle/shock_relations.hpp"

namespace nozzle {

struct NozzleSpec {
  double L = 1.0;
  double sigma = 0.01;
  double xi0 = 0.5;
  double sigma_cap = 0.05;

  // force skips the sigma cap
  void validate(bool force = false) const;
};

struct BackgroundShock {
  GasState u_minus_bar;
  GasState u_plus_bar;
  double rho_minus, rho_plus;
  double c_minus, c_plus;
  double mach2_minus, mach2_plus;
  double p_jump;
  double kappa, kappa1, kappa2;
  PolarCriticalPoints polar;  // of the planar upstream state
};

BackgroundShock build_background(const GasModel& model, const GasState& u_minus_bar);

// Planar upstream state from (p, rho, M).
GasState upstream_state(const GasModel& model, double p, double rho, double mach);

using InletProfile = std::function<GasState(double)>;

struct Quadrature {
  double value;
  double error_estimate;
  int intervals;
};

// eta0 = int_0^1 rho q cos(theta) dx2, Simpson with doubling.
Quadrature mass_flux_width(const GasModel& model, const InletProfile& inlet,
                           double rel_tol = 1e-12);

// Inverse of the inlet mass-flux coordinate, eta -> x2.
class InletMap {
 public:
  InletMap() = default;
  InletMap(const GasModel& model, const InletProfile& inlet, int n = 2048);

  double eta0() const { return eta0_; }
  double y0(double eta) const;
  double eta_of(double x2) const;
  // rho q cos(theta) at the inlet point x2
  double flux_density(double x2) const;

 private:
  GasModel model_;
  InletProfile inlet_;
  double eta0_ = 0.0;
  std::vector<double> x_, eta_, g_;
};

struct PeInterval {
  double prefactor;        // (1 - M+^2) eta0 / (rho+^2 q+^3)
  double g_script;         // consistent with the root of F
  double g_script_literal; // printed integrand, diagnostic only
  double scaled_lo, scaled_hi;
  double lo, hi;           // bounds on Pe
  double mid() const { return 0.5 * (lo + hi); }
};

struct CompatibilityEntry {
  std::string name;
  bool pass;
  double residual;
  double tolerance;
  std::string note;
};

struct CompatibilityReport {
  std::vector<CompatibilityEntry> entries;
  bool all_pass() const;
  bool derivative_conditions_pass() const;
};

struct SetupOptions {
  bool force = false;
};

// Everything derived from the problem data; immutable after construction.
struct ProblemSetup {
  GasModel model;
  NozzleSpec nozzle;
  InflowPerturbation inflow;
  BackgroundShock background;
  InletMap inlet;
  PeInterval pe;

  double sigma() const { return nozzle.sigma; }
  double eta0() const { return inlet.eta0(); }
  GasState inlet_state(double x2) const;
  // U0 composed with Y0 at eta
  GasState perturbation_at_eta(double eta) const;
};

ProblemSetup build_problem(const GasModel& model, const GasState& u_minus_bar,
                           const NozzleSpec& nozzle, const InflowPerturbation& inflow,
                           const SetupOptions& opts = {});

PeInterval admissible_pe_interval(const GasModel& model, const BackgroundShock& bg,
                                  const InflowPerturbation& inflow,
                                  const InletMap& inlet, double L);

CompatibilityReport validate_compatibility(const GasModel& model,
                                           const BackgroundShock& bg,
                                           const InflowPerturbation& inflow,
                                           double sigma, double tol = 1e-6);

}  // namespace nozzle
