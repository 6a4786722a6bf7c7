#pragma once

#include <optional>
#include <vector>

#include "nozzle/kernels.hpp"
#include "nozzle/setup.hpp"

namespace nozzle {

struct MarchGrid {
  int nxi = 256;
  int ny = 64;
  double xi_end = 1.0;
  double eta0 = 1.0;
  double dxi() const { return xi_end / nxi; }
  double deta() const { return eta0 / ny; }
};

struct SupersonicOptions {
  int max_picard = 20;
  double picard_tol = 1e-10;
  bool corrections = true;
  // defaults to sigma
  std::optional<double> upper_wall_angle;
  Exec exec = Exec::Serial;
};

// Inlet perturbation U0(Y0(eta_j)) sampled on the eta grid.
struct InletTrace {
  std::vector<double> p0, theta0, q0, s0;
};

InletTrace sample_inlet(const ProblemSetup& setup, int ny);

// Linearized supersonic deviations on [0, xi_end] x [0, eta0].
// Node (i, j) lives at index i*(ny+1)+j.
struct SupersonicField {
  GasModel model;
  BackgroundShock bg;
  MarchGrid grid;
  double sigma = 0.0;
  double wall_top = 0.0;
  InletTrace inlet;
  std::vector<double> dp, dtheta, dq, ds;
  std::vector<double> f1, f2, f3;   // forcing used by the final pass
  std::vector<double> int_f3;       // int_0^xi f3 along each eta line
  std::vector<double> int_f2;       // double integral of f2 up to xi_i, per row i
  std::vector<double> pass_changes; // sup change between consecutive passes
  int passes = 0;

  int idx(int i, int j) const { return i * (grid.ny + 1) + j; }
  GasState state(int i, int j) const;
  // upstream state at (xi, eta_j), linear in xi between march rows
  GasState trace(double xi, int j) const;
};

// Smallest nxi meeting the CFL bound with safety factor cfl.
int required_march_steps(const BackgroundShock& bg, const MarchGrid& g,
                         double cfl = 0.9);

SupersonicField solve_linearized(const GasModel& model, const BackgroundShock& bg,
                                 const InletTrace& inlet, double sigma,
                                 const MarchGrid& grid,
                                 const SupersonicOptions& opts = {});

struct ShockFaceData {
  double xi_star;
  std::vector<double> delta_p, delta_s, q_combination, int_f3;
  double int_f2;
  double int_delta_p;
  double pl0_lhs, pl0_rhs, pl0_residual;
};

ShockFaceData trace_and_integrals(const SupersonicField& field, double xi_star);

}  // namespace nozzle
