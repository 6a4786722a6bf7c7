#include "nozzle/supersonic.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "nozzle/errors.hpp"

namespace nozzle {

namespace {

struct Coeffs {
  double a, b, lambda;
};

Coeffs march_coeffs(const BackgroundShock& bg) {
  const double rho = bg.rho_minus, q = bg.u_minus_bar.q;
  const double beta2 = bg.mach2_minus - 1.0;
  const double a = rho * rho * q * q * q / beta2;
  const double b = 1.0 / q;
  return {a, b, std::sqrt(a * b)};
}

double trapezoid(const std::vector<double>& v, int off, int n, double h) {
  double s = 0.5 * (v[off] + v[off + n]);
  for (int j = 1; j < n; ++j) s += v[off + j];
  return s * h;
}

// xi-derivative on the march grid, 2nd order everywhere
double d_xi(const std::vector<double>& v, const SupersonicField& f, int i, int j) {
  const int n = f.grid.nxi;
  const double h = f.grid.dxi();
  if (i == 0)
    return (-3.0 * v[f.idx(0, j)] + 4.0 * v[f.idx(1, j)] - v[f.idx(2, j)]) / (2.0 * h);
  if (i == n)
    return (3.0 * v[f.idx(n, j)] - 4.0 * v[f.idx(n - 1, j)] + v[f.idx(n - 2, j)]) / (2.0 * h);
  return (v[f.idx(i + 1, j)] - v[f.idx(i - 1, j)]) / (2.0 * h);
}

void compute_forcing(const SupersonicField& fld, std::vector<double>& f1,
                     std::vector<double>& f2, std::vector<double>& f3) {
  const BackgroundShock& bg = fld.bg;
  const double rb = bg.rho_minus, qb = bg.u_minus_bar.q;
  const double lin2 = (1.0 - bg.mach2_minus) / (rb * rb * qb * qb * qb);
  for (int i = 0; i <= fld.grid.nxi; ++i) {
    for (int j = 0; j <= fld.grid.ny; ++j) {
      const int n = fld.idx(i, j);
      const GasState u = fld.state(i, j);
      const double rho = fld.model.density(u.p, u.s);
      const double m2 = u.q * u.q * rho / (fld.model.gamma * u.p);
      const double dp = d_xi(fld.dp, fld, i, j);
      const double dt = d_xi(fld.dtheta, fld, i, j);
      const double dq = d_xi(fld.dq, fld, i, j);
      const double st = std::sin(u.theta), ct = std::cos(u.theta);
      f1[n] = st / (rho * u.q) * dp - (u.q * ct - qb) * dt;
      f2[n] = st / (rho * u.q) * dt +
              (ct * (1.0 - m2) / (rho * rho * u.q * u.q * u.q) - lin2) * dp;
      f3[n] = -(rho * u.q - rb * qb) * dq;
    }
  }
}

// one linear pass with the given forcing
void march(SupersonicField& fld, const Coeffs& c, Exec ex) {
  const MarchGrid& g = fld.grid;
  const int ny = g.ny, w = ny + 1;
  const double sig = fld.sigma;
  const double rb = fld.bg.rho_minus, qb = fld.bg.u_minus_bar.q;

  for (int j = 0; j <= ny; ++j) {
    fld.dp[fld.idx(0, j)] = sig * fld.inlet.p0[j];
    fld.dtheta[fld.idx(0, j)] = sig * fld.inlet.theta0[j];
    fld.ds[fld.idx(0, j)] = sig * fld.inlet.s0[j];
  }
  // wall values take precedence at the inlet corners
  fld.dtheta[fld.idx(0, 0)] = 0.0;
  fld.dtheta[fld.idx(0, ny)] = fld.wall_top;

  std::vector<double> sp0(w), st0(w), sp1(w), st1(w);
  auto sources = [&](int i, std::vector<double>& sp, std::vector<double>& st) {
    for (int j = 0; j <= ny; ++j) {
      sp[j] = c.a * fld.f2[fld.idx(i, j)];
      st[j] = c.b * fld.f1[fld.idx(i, j)];
    }
  };
  const LwStep step{c.a, c.b, g.dxi(), g.deta(), fld.wall_top};
  sources(0, sp0, st0);
  for (int i = 0; i < g.nxi; ++i) {
    sources(i + 1, sp1, st1);
    lw_step(ex, step, ny, &fld.dp[fld.idx(i, 0)], &fld.dtheta[fld.idx(i, 0)], sp0.data(),
            st0.data(), sp1.data(), st1.data(), &fld.dp[fld.idx(i + 1, 0)],
            &fld.dtheta[fld.idx(i + 1, 0)]);
    for (int j = 0; j <= ny; ++j) fld.ds[fld.idx(i + 1, j)] = fld.ds[fld.idx(0, j)];
    std::swap(sp0, sp1);
    std::swap(st0, st1);
  }

  // cumulative f-integrals and the q deviation
  const double h = g.dxi();
  for (int j = 0; j <= ny; ++j) {
    fld.int_f3[fld.idx(0, j)] = 0.0;
    for (int i = 1; i <= g.nxi; ++i) {
      fld.int_f3[fld.idx(i, j)] =
          fld.int_f3[fld.idx(i - 1, j)] + 0.5 * h * (fld.f3[fld.idx(i - 1, j)] + fld.f3[fld.idx(i, j)]);
    }
  }
  fld.int_f2.assign(g.nxi + 1, 0.0);
  double prev = trapezoid(fld.f2, fld.idx(0, 0), ny, g.deta());
  for (int i = 1; i <= g.nxi; ++i) {
    const double cur = trapezoid(fld.f2, fld.idx(i, 0), ny, g.deta());
    fld.int_f2[i] = fld.int_f2[i - 1] + 0.5 * h * (prev + cur);
    prev = cur;
  }
  for (int i = 0; i <= g.nxi; ++i) {
    for (int j = 0; j <= ny; ++j) {
      const int n = fld.idx(i, j);
      const double comb = sig * (rb * qb * fld.inlet.q0[j] + fld.inlet.p0[j]) + fld.int_f3[n];
      fld.dq[n] = (comb - fld.dp[n]) / (rb * qb);
    }
  }
}

double sup_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
  return m;
}

}  // namespace

InletTrace sample_inlet(const ProblemSetup& setup, int ny) {
  InletTrace t;
  t.p0.resize(ny + 1);
  t.theta0.resize(ny + 1);
  t.q0.resize(ny + 1);
  t.s0.resize(ny + 1);
  for (int j = 0; j <= ny; ++j) {
    const GasState u = setup.perturbation_at_eta(setup.eta0() * j / ny);
    t.p0[j] = u.p;
    t.theta0[j] = u.theta;
    t.q0[j] = u.q;
    t.s0[j] = u.s;
  }
  return t;
}

GasState SupersonicField::state(int i, int j) const {
  const int n = idx(i, j);
  const GasState& b = bg.u_minus_bar;
  return {b.p + dp[n], b.theta + dtheta[n], b.q + dq[n], b.s + ds[n]};
}

// cubic Hermite in xi with finite-difference slopes, so the trace is C1 in
// the shock position
GasState SupersonicField::trace(double xi, int j) const {
  const int n = grid.nxi;
  const double x = std::clamp(xi / grid.dxi(), 0.0, static_cast<double>(n));
  const int i = std::min(static_cast<int>(x), n - 1);
  const double t = x - i;
  auto node = [&](int k) {
    const GasState u = state(k, j);
    return std::array<double, 4>{u.p, u.theta, u.q, u.s};
  };
  // slope per unit index
  auto slope = [&](int k) {
    std::array<double, 4> d{};
    std::array<double, 4> a, b, c;
    if (k == 0) {
      a = node(0), b = node(1), c = node(2);
      for (int m = 0; m < 4; ++m) d[m] = 0.5 * (-3.0 * a[m] + 4.0 * b[m] - c[m]);
    } else if (k == n) {
      a = node(n), b = node(n - 1), c = node(n - 2);
      for (int m = 0; m < 4; ++m) d[m] = 0.5 * (3.0 * a[m] - 4.0 * b[m] + c[m]);
    } else {
      a = node(k - 1), c = node(k + 1);
      for (int m = 0; m < 4; ++m) d[m] = 0.5 * (c[m] - a[m]);
    }
    return d;
  };
  const auto v0 = node(i), v1 = node(i + 1);
  const auto m0 = slope(i), m1 = slope(i + 1);
  const double t2 = t * t, t3 = t2 * t;
  const double h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + t, h01 = -2 * t3 + 3 * t2,
               h11 = t3 - t2;
  std::array<double, 4> r;
  for (int m = 0; m < 4; ++m) r[m] = h00 * v0[m] + h10 * m0[m] + h01 * v1[m] + h11 * m1[m];
  return {r[0], r[1], r[2], r[3]};
}

int required_march_steps(const BackgroundShock& bg, const MarchGrid& g, double cfl) {
  const Coeffs c = march_coeffs(bg);
  return static_cast<int>(std::ceil(g.xi_end * c.lambda / (cfl * g.deta())));
}

SupersonicField solve_linearized(const GasModel& model, const BackgroundShock& bg,
                                 const InletTrace& inlet, double sigma,
                                 const MarchGrid& grid, const SupersonicOptions& opts) {
  if (grid.ny < 2 || grid.nxi < 2 || !(grid.xi_end > 0.0) || !(grid.eta0 > 0.0)) {
    fail(ErrorKind::Grid, "supersonic grid needs nxi, ny >= 2 and positive extents");
  }
  if (static_cast<int>(inlet.p0.size()) != grid.ny + 1) {
    fail(ErrorKind::Grid, "inlet trace size does not match the eta grid");
  }
  const Coeffs c = march_coeffs(bg);
  const double nu = grid.dxi() * c.lambda / grid.deta();
  if (nu > 1.0) {
    std::ostringstream os;
    os << "supersonic march violates CFL (nu=" << nu << "); use nxi >= "
       << required_march_steps(bg, grid);
    fail(ErrorKind::Grid, os.str());
  }
  SupersonicField f;
  f.model = model;
  f.bg = bg;
  f.grid = grid;
  f.sigma = sigma;
  f.wall_top = opts.upper_wall_angle.value_or(sigma);
  f.inlet = inlet;
  const size_t total = static_cast<size_t>(grid.nxi + 1) * (grid.ny + 1);
  for (auto* v : {&f.dp, &f.dtheta, &f.dq, &f.ds, &f.f1, &f.f2, &f.f3, &f.int_f3})
    v->assign(total, 0.0);

  march(f, c, opts.exec);
  f.passes = 1;
  if (!opts.corrections || sigma == 0.0) return f;

  std::vector<double> f1(total), f2(total), f3(total);
  for (int pass = 1; pass < opts.max_picard; ++pass) {
    compute_forcing(f, f1, f2, f3);
    const std::vector<double> old_p = f.dp, old_t = f.dtheta, old_q = f.dq;
    f.f1 = f1;
    f.f2 = f2;
    f.f3 = f3;
    march(f, c, opts.exec);
    ++f.passes;
    const double change = std::max({sup_diff(old_p, f.dp), sup_diff(old_t, f.dtheta),
                                     sup_diff(old_q, f.dq)});
    f.pass_changes.push_back(change);
    if (change <= opts.picard_tol) return f;
  }
  std::ostringstream os;
  os << "supersonic corrections did not settle in " << opts.max_picard
     << " passes, last change " << (f.pass_changes.empty() ? 0.0 : f.pass_changes.back());
  fail(ErrorKind::NonConvergence, os.str());
}

ShockFaceData trace_and_integrals(const SupersonicField& fld, double xi_star) {
  const MarchGrid& g = fld.grid;
  const int ny = g.ny;
  ShockFaceData d{};
  d.xi_star = xi_star;
  const double x = std::clamp(xi_star / g.dxi(), 0.0, static_cast<double>(g.nxi));
  const int i = std::min(static_cast<int>(x), g.nxi - 1);
  const double t = x - i;
  const double rb = fld.bg.rho_minus, qb = fld.bg.u_minus_bar.q;
  auto lerp = [&](const std::vector<double>& v, int j) {
    return (1 - t) * v[fld.idx(i, j)] + t * v[fld.idx(i + 1, j)];
  };
  d.delta_p.resize(ny + 1);
  d.delta_s.resize(ny + 1);
  d.q_combination.resize(ny + 1);
  d.int_f3.resize(ny + 1);
  for (int j = 0; j <= ny; ++j) {
    d.delta_p[j] = lerp(fld.dp, j);
    d.delta_s[j] = lerp(fld.ds, j);
    d.q_combination[j] = rb * qb * lerp(fld.dq, j) + d.delta_p[j];
    d.int_f3[j] = lerp(fld.int_f3, j);
  }
  d.int_f2 = (1 - t) * fld.int_f2[i] + t * fld.int_f2[i + 1];
  d.int_delta_p = trapezoid(d.delta_p, 0, ny, g.deta());
  const double k = (fld.bg.mach2_minus - 1.0) / (rb * qb * qb);
  const double int_p0 = trapezoid(fld.inlet.p0, 0, ny, g.deta());
  d.pl0_lhs = k * d.int_delta_p;
  d.pl0_rhs = -fld.wall_top * rb * qb * xi_star + fld.sigma * k * int_p0 + rb * qb * d.int_f2;
  d.pl0_residual = d.pl0_lhs - d.pl0_rhs;
  return d;
}

}  // namespace nozzle
