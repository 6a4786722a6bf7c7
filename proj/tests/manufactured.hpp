#pragma once

// Manufactured variable-coefficient theta problem shared by the unit tests
// and the acceptance run.

#include <algorithm>
#include <cmath>
#include <functional>

#include "nozzle/subsonic.hpp"

namespace nozzle::mms {

inline double c11f(double x, double) { return 2.0 + 0.5 * std::sin(x); }
inline double c12f(double, double y) { return 0.3 * std::cos(y); }
inline double c22f(double x, double y) { return 1.0 + 0.25 * x * y; }
inline double th(double x, double y) { return std::sin(2 * x + 1) * std::cos(1.3 * y) + 0.1 * y; }
inline double th_x(double x, double y) { return 2 * std::cos(2 * x + 1) * std::cos(1.3 * y); }
inline double th_y(double x, double y) { return -1.3 * std::sin(2 * x + 1) * std::sin(1.3 * y) + 0.1; }

// fluxes of the divergence operator with analytic theta derivatives
inline double flux_x(double x, double y) { return c11f(x, y) * th_x(x, y) + c12f(x, y) * th_y(x, y); }
inline double flux_y(double x, double y) { return c12f(x, y) * th_x(x, y) + c22f(x, y) * th_y(x, y); }

// fourth-order central differences of the smooth fluxes; error ~1e-12
inline double d4(const std::function<double(double)>& f, double x) {
  const double h = 1e-3;
  return (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) / (12 * h);
}

inline double source(double x, double y) {
  return d4([y](double s) { return flux_x(s, y); }, x) +
         d4([x](double s) { return flux_y(x, s); }, y);
}

inline ThetaProblem manufactured(int n) {
  ThetaProblem pb;
  pb.grid.nx = n;
  pb.grid.ny = n;
  pb.grid.xi0 = 0.5;
  pb.grid.L = 1.5;
  pb.grid.eta0 = 1.2;
  const FixedDomainGrid& g = pb.grid;
  pb.c11.resize(g.size());
  pb.c12.resize(g.size());
  pb.c22.resize(g.size());
  pb.source.resize(g.size());
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i) {
      const double x = g.X(i), y = g.Y(j);
      const int k = g.idx(i, j);
      pb.c11[k] = c11f(x, y);
      pb.c12[k] = c12f(x, y);
      pb.c22[k] = c22f(x, y);
      pb.source[k] = source(x, y);
    }
  pb.bottom.resize(n + 1);
  pb.top.resize(n + 1);
  for (int i = 0; i <= n; ++i) {
    pb.bottom[i] = th(g.X(i), 0.0);
    pb.top[i] = th(g.X(i), g.eta0);
  }
  pb.shock_rows.resize(n + 1);
  pb.exit_rows.resize(n + 1);
  for (int j = 0; j <= n; ++j) {
    const double y = g.Y(j);
    pb.shock_rows[j] = {1.0, 0.3, th_x(g.xi0, y) + 0.3 * th_y(g.xi0, y)};
    pb.exit_rows[j] = {-1.2, 0.5, -1.2 * th_x(g.L, y) + 0.5 * th_y(g.L, y)};
  }
  return pb;
}

inline double manufactured_error(int n, Exec ex = Exec::Serial, double* residual = nullptr) {
  ThetaProblem pb = manufactured(n);
  pb.exec = ex;
  const ThetaSolution s = solve_theta(pb);
  if (residual) *residual = s.residual;
  double e = 0.0;
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i)
      e = std::max(e, std::abs(s.theta[pb.grid.idx(i, j)] - th(pb.grid.X(i), pb.grid.Y(j))));
  return e;
}

}  // namespace nozzle::mms
