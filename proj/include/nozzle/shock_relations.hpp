#pragma once

#include <array>

#include "nozzle/gas.hpp"

namespace nozzle {

enum class PolarBranch { Upper, Lower };

const char* branch_name(PolarBranch b);

struct PolarPoint {
  double theta;
  double p;
  GasState downstream;
  PolarBranch branch;
};

struct PolarCriticalPoints {
  double p_max;
  double p_star;
  double theta_star;  // max deflection, measured from theta_minus
  double p_sonic;
  double theta_sonic;  // deflection at the sonic point
};

struct H1Eval {
  double value;
  double d_theta;
  double d_p;
  // oriented d_p is positive (p above p_star on this branch)
  bool dp_certified;
};

struct RhResiduals {
  double g1, g2, g3, g4;
  double max_abs() const;
};

// Point on the strong (subsonic-side) arc selected by downstream angle.
struct ArcPoint {
  double p;
  double dp_dtheta;
  double wave_angle;  // beta, relative to the upstream flow direction
  GasState downstream;
};

GasState normal_shock_downstream(const GasModel& model, const GasState& u_minus);

PolarPoint polar_state_at_pressure(const GasModel& model, const GasState& u_minus,
                                   double p, PolarBranch branch);

PolarCriticalPoints polar_critical_points(const GasModel& model,
                                          const GasState& u_minus);

// Right-hand side of the theta-p polar relation (without the branch sign) and
// its p-derivative.
double polar_rhs(const GasModel& model, const GasState& u_minus, double p);
double polar_rhs_dp(const GasModel& model, const GasState& u_minus, double p);

H1Eval h1_residual_and_gradient(const GasModel& model, double theta, double p,
                                const GasState& u_minus,
                                PolarBranch branch = PolarBranch::Upper);

// d H1 / d(p_-, theta_-, q_-, s_-) at fixed (theta, p), central differences.
std::array<double, 4> h1_upstream_gradient(const GasModel& model, double theta,
                                           double p, const GasState& u_minus,
                                           PolarBranch branch = PolarBranch::Upper);

RhResiduals rh_residuals(const GasModel& model, const GasState& u_plus,
                         const GasState& u_minus, double psi_slope);

GasState h3_downstream(const GasModel& model, const GasState& u_minus,
                       double psi_slope, double tol = 1e-12);

// Pressure on the strong arc as a smooth function of the downstream angle.
ArcPoint strong_arc_at_angle(const GasModel& model, const GasState& u_minus,
                             double theta);

// Downstream state on the strong arc at wave angle beta.
GasState strong_arc_state(const GasModel& model, const GasState& u_minus,
                          double beta);

}  // namespace nozzle
