#include "nozzle/kernels.hpp"

#include <omp.h>

#include <algorithm>
#include <climits>
#include <cmath>
#include <cstdlib>
#include <sstream>

#include "nozzle/errors.hpp"

namespace nozzle {

int kernel_threads() {
  int n = omp_get_max_threads();
  if (const char* env = std::getenv("NOZZLE_SHOCK_THREADS")) {
    const int cap = std::atoi(env);
    if (cap > 0) n = std::min(n, cap);
  }
  return std::max(1, n);
}

namespace {

inline void lw_node(const LwStep& k, int ny, const double* p, const double* th,
                    const double* sp0, const double* st0, const double* sp1,
                    const double* st1, double* p_out, double* th_out, int j) {
  const double r = k.dxi / k.h;
  const double ab = k.a * k.b;
  // wall nodes: half cell with zero flux of theta_xi = -b p_eta + St, so the
  // pressure integral across the channel is conserved exactly
  if (j == 0 || j == ny) {
    const int in = j == 0 ? 1 : ny - 1;
    const double side = j == 0 ? 1.0 : -1.0;
    p_out[j] = p[j] - side * r * k.a * (th[in] - th[j]) + r * r * ab * (p[in] - p[j]) +
               0.5 * k.dxi * (sp0[j] + sp1[j]) -
               side * 0.5 * r * k.dxi * k.a * (st0[j] + st0[in]);
    return;
  }
  p_out[j] = p[j] - 0.5 * r * k.a * (th[j + 1] - th[j - 1]) +
             0.5 * r * r * ab * (p[j + 1] - 2.0 * p[j] + p[j - 1]) +
             0.5 * k.dxi * (sp0[j] + sp1[j]) - 0.25 * r * k.dxi * k.a * (st0[j + 1] - st0[j - 1]);
  th_out[j] = th[j] - 0.5 * r * k.b * (p[j + 1] - p[j - 1]) +
              0.5 * r * r * ab * (th[j + 1] - 2.0 * th[j] + th[j - 1]) +
              0.5 * k.dxi * (st0[j] + st1[j]) - 0.25 * r * k.dxi * k.b * (sp0[j + 1] - sp0[j - 1]);
}

}  // namespace

void lw_step(Exec ex, const LwStep& k, int ny, const double* p, const double* th,
             const double* sp0, const double* st0, const double* sp1,
             const double* st1, double* p_out, double* th_out) {
  if (ex == Exec::Parallel) {
#pragma omp parallel for schedule(static) num_threads(kernel_threads())
    for (int j = 0; j <= ny; ++j)
      lw_node(k, ny, p, th, sp0, st0, sp1, st1, p_out, th_out, j);
  } else {
    for (int j = 0; j <= ny; ++j)
      lw_node(k, ny, p, th, sp0, st0, sp1, st1, p_out, th_out, j);
  }
  th_out[0] = 0.0;
  th_out[ny] = k.wall_top;
}

namespace {

// returns false when the node is not elliptic
inline bool coeff_node(const GasModel& model, const CoefficientInput& in,
                       CoefficientOutput& out, int i, int j) {
  const int n = j * (in.nx + 1) + i;
  const double p = in.p[n], th = in.theta[n], q = in.q[n];
  const double rho = model.density(p, in.s[n]);
  const double m2 = q * q * rho / (model.gamma * p);
  const double ct = std::cos(th), st = std::sin(th);
  out.mach2[n] = m2;
  if (!(m2 < 1.0) || !(ct > 0.0) || !(p > 0.0) || !(q > 0.0)) return false;
  const double den = (1.0 - m2) * ct;
  const double a11 = q * (1.0 - m2 * ct * ct) / den;
  const double a12 = -rho * q * q * st / den;
  const double a22 = rho * rho * q * q * q / den;
  const double tr = 0.5 * (a11 + a22);
  const double dd = std::sqrt(0.25 * (a11 - a22) * (a11 - a22) + a12 * a12);
  out.lambda_min[n] = tr - dd;
  const double sr = in.s_row[j];
  const double x = in.xi0 + i * in.hx;
  const double t = in.slope_row[j] * (x - in.L) / (in.L - in.psi_row[j]);
  out.c11[n] = a11 / sr + 2.0 * t * a12 + sr * t * t * a22;
  out.c12[n] = a12 + sr * t * a22;
  out.c22[n] = sr * a22;
  return out.lambda_min[n] > 0.0;
}

}  // namespace

CoefficientOutput evaluate_coefficients(Exec ex, const GasModel& model,
                                        const CoefficientInput& in) {
  const int total = (in.nx + 1) * (in.ny + 1);
  CoefficientOutput out;
  out.c11.assign(total, 0.0);
  out.c12.assign(total, 0.0);
  out.c22.assign(total, 0.0);
  out.lambda_min.assign(total, 0.0);
  out.mach2.assign(total, 0.0);
  int bad = INT_MAX;
  if (ex == Exec::Parallel) {
#pragma omp parallel for schedule(static) reduction(min : bad) num_threads(kernel_threads())
    for (int n = 0; n < total; ++n) {
      if (!coeff_node(model, in, out, n % (in.nx + 1), n / (in.nx + 1)))
        bad = std::min(bad, n);
    }
  } else {
    for (int n = 0; n < total; ++n) {
      if (!coeff_node(model, in, out, n % (in.nx + 1), n / (in.nx + 1)))
        bad = std::min(bad, n);
    }
  }
  if (bad != INT_MAX) {
    const int i = bad % (in.nx + 1), j = bad / (in.nx + 1);
    std::ostringstream os;
    os << "ellipticity lost at node (i=" << i << ", j=" << j
       << "): M^2=" << out.mach2[bad] << " theta=" << in.theta[bad];
    fail(ErrorKind::Hypothesis, os.str());
  }
  return out;
}

namespace {

inline void stencil_node(int nx, double hx, double hy, const double* c11,
                         const double* c12, const double* c22, StencilRows& s,
                         int i, int j) {
  const int w = nx + 1;
  const int k = (j - 1) * (nx - 1) + (i - 1);
  const int n = j * w + i;
  auto avg = [](const double* c, int a, int b) { return 0.5 * (c[a] + c[b]); };
  // face coefficients
  const double a11e = avg(c11, n, n + 1), a11w = avg(c11, n, n - 1);
  const double a12e = avg(c12, n, n + 1), a12w = avg(c12, n, n - 1);
  const double a22n = avg(c22, n, n + w), a22s = avg(c22, n, n - w);
  const double a12n = avg(c12, n, n + w), a12s = avg(c12, n, n - w);
  const double ix2 = 1.0 / (hx * hx), iy2 = 1.0 / (hy * hy);
  const double ixy = 1.0 / (4.0 * hx * hy);
  // offsets: C, E, W, N, S, NE, NW, SE, SW
  const int cols[9] = {n, n + 1, n - 1, n + w, n - w, n + w + 1, n + w - 1, n - w + 1, n - w - 1};
  double v[9] = {0, 0, 0, 0, 0, 0, 0, 0, 0};
  // d/dX (c11 dX): standard
  v[0] -= (a11e + a11w) * ix2;
  v[1] += a11e * ix2;
  v[2] += a11w * ix2;
  // d/dY (c22 dY)
  v[0] -= (a22n + a22s) * iy2;
  v[3] += a22n * iy2;
  v[4] += a22s * iy2;
  // d/dX (c12 dY): dY at east face averaged from nodes n and n+1
  //   east: (T_NE - T_SE + T_N - T_S) / (4 hy) * a12e / hx
  v[5] += a12e * ixy;
  v[7] -= a12e * ixy;
  v[3] += a12e * ixy;
  v[4] -= a12e * ixy;
  v[6] -= a12w * ixy;
  v[8] += a12w * ixy;
  v[3] -= a12w * ixy;
  v[4] += a12w * ixy;
  // d/dY (c12 dX)
  v[5] += a12n * ixy;
  v[6] -= a12n * ixy;
  v[1] += a12n * ixy;
  v[2] -= a12n * ixy;
  v[7] -= a12s * ixy;
  v[8] += a12s * ixy;
  v[1] -= a12s * ixy;
  v[2] += a12s * ixy;
  for (int m = 0; m < 9; ++m) {
    s.row[9 * k + m] = n;
    s.col[9 * k + m] = cols[m];
    s.val[9 * k + m] = v[m];
  }
}

}  // namespace

StencilRows assemble_interior(Exec ex, int nx, int ny, double hx, double hy,
                              const double* c11, const double* c12,
                              const double* c22) {
  const int interior = (nx - 1) * (ny - 1);
  StencilRows s;
  s.row.assign(9 * interior, 0);
  s.col.assign(9 * interior, 0);
  s.val.assign(9 * interior, 0.0);
  if (ex == Exec::Parallel) {
#pragma omp parallel for schedule(static) num_threads(kernel_threads())
    for (int k = 0; k < interior; ++k)
      stencil_node(nx, hx, hy, c11, c12, c22, s, 1 + k % (nx - 1), 1 + k / (nx - 1));
  } else {
    for (int k = 0; k < interior; ++k)
      stencil_node(nx, hx, hy, c11, c12, c22, s, 1 + k % (nx - 1), 1 + k / (nx - 1));
  }
  return s;
}

std::vector<double> sample_function(Exec ex, const std::function<double(double)>& f,
                                    const std::vector<double>& xs) {
  const int n = static_cast<int>(xs.size());
  std::vector<double> out(n, 0.0);
  if (ex == Exec::Parallel) {
    // exceptions must not cross the parallel region
    std::vector<std::string> errs(n);
    std::vector<int> kinds(n, -1);
#pragma omp parallel for schedule(dynamic) num_threads(kernel_threads())
    for (int i = 0; i < n; ++i) {
      try {
        out[i] = f(xs[i]);
      } catch (const Error& e) {
        kinds[i] = static_cast<int>(e.kind());
        errs[i] = e.what();
      } catch (const std::exception& e) {
        kinds[i] = static_cast<int>(ErrorKind::Solver);
        errs[i] = e.what();
      }
    }
    for (int i = 0; i < n; ++i)
      if (kinds[i] >= 0) throw Error(static_cast<ErrorKind>(kinds[i]), errs[i]);
  } else {
    for (int i = 0; i < n; ++i) out[i] = f(xs[i]);
  }
  return out;
}

std::vector<PolarSample> sample_polar(Exec ex, const GasModel& model,
                                      const GasState& u_minus, int n) {
  if (n < 1) fail(ErrorKind::Config, "polar sampling needs n >= 1");
  const double p_lo = u_minus.p;
  const double p_hi = normal_shock_downstream(model, u_minus).p;
  std::vector<PolarSample> out(2 * (n + 1));
  auto one = [&](int k) {
    const PolarBranch br = k <= n ? PolarBranch::Upper : PolarBranch::Lower;
    const int i = k <= n ? k : k - (n + 1);
    const double p = i == n ? p_hi : p_lo + (p_hi - p_lo) * i / n;
    const PolarPoint pt = polar_state_at_pressure(model, u_minus, p, br);
    out[k] = {pt.theta, pt.p, derived(model, pt.downstream).mach, br};
  };
  const int total = static_cast<int>(out.size());
  if (ex == Exec::Parallel) {
#pragma omp parallel for schedule(static) num_threads(kernel_threads())
    for (int k = 0; k < total; ++k) one(k);
  } else {
    for (int k = 0; k < total; ++k) one(k);
  }
  return out;
}

}  // namespace nozzle
