#pragma once

// Hot loops with a serial reference and an OpenMP variant. The parallel
// versions produce bitwise-identical output to the serial ones.

#include <functional>
#include <vector>

#include "nozzle/gas.hpp"
#include "nozzle/shock_relations.hpp"

namespace nozzle {

enum class Exec { Serial, Parallel };

// Threads used by Exec::Parallel; NOZZLE_SHOCK_THREADS caps it.
int kernel_threads();

// One Lax-Wendroff step of  p_xi = -a theta_eta + Sp,  theta_xi = -b p_eta + St
// on ny+1 nodes with slip walls (theta = 0 at j = 0, wall_top at ny); wall
// nodes use a half cell with zero normal flux.
struct LwStep {
  double a, b, dxi, h, wall_top;
};

void lw_step(Exec ex, const LwStep& k, int ny, const double* p, const double* th,
             const double* sp0, const double* st0, const double* sp1,
             const double* st1, double* p_out, double* th_out);

// Nodal elliptic coefficients in the straightened coordinates. Fields and
// outputs are (nx+1)*(ny+1), index j*(nx+1)+i. s_row and slope_row are per j.
struct CoefficientInput {
  int nx, ny;
  double xi0, L, hx;
  const double *p, *theta, *q, *s;
  const double* s_row;      // (L - psi) / (L - xi0)
  const double* psi_row;    // psi(eta_j)
  const double* slope_row;  // psi'(eta_j)
};

struct CoefficientOutput {
  std::vector<double> c11, c12, c22, lambda_min, mach2;
};

// Throws a hypothesis error naming the first node (lowest index) that is not
// elliptic.
CoefficientOutput evaluate_coefficients(Exec ex, const GasModel& model,
                                        const CoefficientInput& in);

// 9-point divergence stencil rows for interior nodes. Each interior node
// writes exactly 9 (col, value) entries at offset 9*k, k = interior index.
struct StencilRows {
  std::vector<int> row, col;
  std::vector<double> val;
};

StencilRows assemble_interior(Exec ex, int nx, int ny, double hx, double hy,
                              const double* c11, const double* c12,
                              const double* c22);

// f evaluated at each abscissa; f must be safe to call concurrently.
std::vector<double> sample_function(Exec ex, const std::function<double(double)>& f,
                                    const std::vector<double>& xs);

struct PolarSample {
  double theta, p, mach_down;
  PolarBranch branch;
};

// n+1 pressures from p_- to p_max on each branch (upper first).
std::vector<PolarSample> sample_polar(Exec ex, const GasModel& model,
                                      const GasState& u_minus, int n);

}  // namespace nozzle
