#include "nozzle/shock_solver.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "nozzle/errors.hpp"
#include "nozzle/roots.hpp"

namespace nozzle {

namespace {

double trapezoid(const std::vector<double>& v, double h) {
  const int n = static_cast<int>(v.size()) - 1;
  double s = 0.5 * (v[0] + v[n]);
  for (int j = 1; j < n; ++j) s += v[j];
  return s * h;
}

double c1_of(const BackgroundShock& bg) {
  const double rp = bg.rho_plus, qp = bg.u_plus_bar.q;
  return (1.0 - bg.mach2_plus) / (rp * rp * qp * qp * qp);
}

void check_domain(const ProblemSetup& s, double delta_xi) {
  const double lo = -s.nozzle.xi0, hi = s.nozzle.L - s.nozzle.xi0;
  const double slack = 1e-12 * s.nozzle.L;
  if (!(delta_xi >= lo - slack && delta_xi <= hi + slack)) {
    std::ostringstream os;
    os << "delta_xi=" << delta_xi << " outside (" << lo << ", " << hi << ")";
    fail(ErrorKind::Domain, os.str());
  }
}

double sup_diff(const std::vector<double>& a, const std::vector<double>& b,
                const FixedDomainGrid& g) {
  double m = 0.0;
  for (int j = 0; j <= g.ny; ++j)
    for (int i = 0; i <= g.nx; ++i) {
      if (g.in_corner_collar(i, j)) continue;
      const int n = g.idx(i, j);
      m = std::max(m, std::abs(a[n] - b[n]));
    }
  return m;
}

double field_diff(const FieldSet& a, const FieldSet& b) {
  const FixedDomainGrid& g = a.grid;
  return std::max({sup_diff(a.p, b.p, g), sup_diff(a.theta, b.theta, g),
                   sup_diff(a.q, b.q, g), sup_diff(a.s, b.s, g)});
}

// collar-excluded slope difference: drop the two nodes next to each corner
double slope_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  const int n = static_cast<int>(a.size()) - 1;
  for (int j = 2; j <= n - 2; ++j) m = std::max(m, std::abs(a[j] - b[j]));
  return m;
}

struct LiteralG {
  double g1, g2, g3;
};

LiteralG literal_g(const GasModel& model, const BackgroundShock& bg, const GasState& up,
                   const GasState& um) {
  const double g = model.gamma, cv = model.c_v;
  auto lin1 = [&](const GasState& u, const GasState& ub, double rho, double c) {
    const double dp = u.p - ub.p, dq = u.q - ub.q, ds = u.s - ub.s;
    return dp / (rho * rho * ub.q * c * c) + dq / (rho * ub.q * ub.q) -
           ds / (g * cv * rho * ub.q);
  };
  const DerivedState a = derived(model, up), b = derived(model, um);
  const GasState& P = bg.u_plus_bar;
  const GasState& M = bg.u_minus_bar;
  const double rP = bg.rho_plus, rM = bg.rho_minus, cP = bg.c_plus, cM = bg.c_minus;
  const double jp = up.p - um.p, jv = a.v_comp - b.v_comp;
  const double l1p = lin1(up, P, rP, cP), l1m = lin1(um, M, rM, cM);
  LiteralG r{};
  r.g1 = (a.v_comp / a.u_comp - b.v_comp / b.u_comp) * jv / jp +
         (1.0 / (a.rho * a.u_comp) - 1.0 / (rP * P.q) + l1p) -
         (1.0 / (b.rho * b.u_comp) - 1.0 / (rM * M.q) + l1m);
  const double dpP = up.p - P.p, dqP = up.q - P.q, dpM = um.p - M.p, dqM = um.q - M.q;
  r.g2 = -(up.p * a.v_comp / a.u_comp - um.p * b.v_comp / b.u_comp) * jv / jp -
         (a.u_comp + up.p / (a.rho * a.u_comp) - P.q - P.p / (rP * P.q) - dqP - dpP / (rP * P.q)) -
         P.p * l1p +
         (b.u_comp + um.p / (b.rho * b.u_comp) - M.q - M.p / (rM * M.q) - dqM - dpM / (rM * M.q)) +
         M.p * l1m;
  const double iP = cP * cP / (g - 1.0), iM = cM * cM / (g - 1.0);
  r.g3 = -(a.bernoulli_B - 0.5 * P.q * P.q - iP - dpP / rP - P.q * dqP -
           P.p * (up.s - P.s) / ((g - 1.0) * cv * rP)) +
         (b.bernoulli_B - 0.5 * M.q * M.q - iM - dpM / rM - M.q * dqM -
          M.p * (um.s - M.s) / ((g - 1.0) * cv * rM));
  return r;
}

}  // namespace

ShockFront make_front(double xi0, double delta_xi, const std::vector<double>& slope,
                      double eta0) {
  ShockFront f;
  f.delta_xi = delta_xi;
  f.xi_star = xi0 + delta_xi;
  f.slope = slope;
  const int ny = static_cast<int>(slope.size()) - 1;
  const double h = eta0 / ny;
  f.position.assign(ny + 1, f.xi_star);
  for (int j = ny - 1; j >= 0; --j)
    f.position[j] = f.position[j + 1] - 0.5 * h * (slope[j] + slope[j + 1]);
  return f;
}

double f_tilde_linear(const ProblemSetup& s, double pe, double delta_xi) {
  check_domain(s, delta_xi);
  const double k = s.background.kappa;
  const double xs = s.nozzle.xi0 + delta_xi;
  return (1.0 - k) * xs + (s.nozzle.L - xs) + s.pe.g_script - s.pe.prefactor * pe;
}

double f_tilde_linear_root(const ProblemSetup& s, double pe) {
  return (s.nozzle.L + s.pe.g_script - s.pe.prefactor * pe) / s.background.kappa -
         s.nozzle.xi0;
}

double solvability_f_tilde(const SolvabilityContext& ctx, double delta_xi) {
  const ProblemSetup& s = *ctx.setup;
  if (!ctx.corrected()) return f_tilde_linear(s, ctx.pe, delta_xi);
  check_domain(s, delta_xi);
  const SupersonicField& sup = *ctx.supersonic;
  const BackgroundShock& bg = s.background;
  const double sigma = s.sigma();
  const int ny = static_cast<int>(ctx.theta_shock.size()) - 1;
  const ShockFront front = make_front(s.nozzle.xi0, delta_xi, ctx.slope, s.eta0());
  std::vector<double> dev(ny + 1);
  for (int j = 0; j <= ny; ++j) {
    const GasState um = sup.trace(front.position[j], j);
    const double p = strong_arc_at_angle(s.model, um, ctx.theta_shock[j]).p;
    dev[j] = p - bg.u_plus_bar.p - sigma * ctx.pe;
  }
  const double integral = trapezoid(dev, s.eta0() / ny);
  return (c1_of(bg) * integral + sigma * (s.nozzle.L - front.xi_star)) / sigma + ctx.feedback;
}

FTildeScan scan_f_tilde(const SolvabilityContext& ctx, int n, Exec ex) {
  const ProblemSetup& s = *ctx.setup;
  FTildeScan sc;
  sc.delta_xi.resize(n);
  const double lo = -s.nozzle.xi0, hi = s.nozzle.L - s.nozzle.xi0;
  for (int k = 0; k < n; ++k) sc.delta_xi[k] = lo + (hi - lo) * k / (n - 1);
  sc.value = sample_function(
      ex, [&ctx](double d) { return solvability_f_tilde(ctx, d); }, sc.delta_xi);
  for (int k = 0; k + 1 < n; ++k) {
    if (std::signbit(sc.value[k]) != std::signbit(sc.value[k + 1])) ++sc.sign_changes;
    if (sc.value[k + 1] > sc.value[k]) ++sc.ascending_pairs;
  }
  return sc;
}

LocateResult locate_shock(const SolvabilityContext& ctx, int n_scan, Exec ex) {
  const ProblemSetup& s = *ctx.setup;
  const FTildeScan sc = scan_f_tilde(ctx, n_scan, ex);
  if (sc.sign_changes == 0) {
    std::ostringstream os;
    os << "Pe=" << ctx.pe << " outside admissible range: F has no sign change on ("
       << sc.delta_xi.front() << ", " << sc.delta_xi.back() << "), F(ends)=("
       << sc.value.front() << ", " << sc.value.back() << "); interval is (" << s.pe.lo
       << ", " << s.pe.hi << ")";
    fail(ErrorKind::NoRoot, os.str());
  }
  if (sc.sign_changes > 1) {
    std::ostringstream os;
    os << "monotonicity violated: F changes sign " << sc.sign_changes << " times";
    fail(ErrorKind::Monotonicity, os.str());
  }
  int k = 0;
  while (std::signbit(sc.value[k]) == std::signbit(sc.value[k + 1])) ++k;
  int evals = n_scan;
  auto f = [&](double d) {
    ++evals;
    return solvability_f_tilde(ctx, d);
  };
  const RootResult r = bisect(f, sc.delta_xi[k], sc.delta_xi[k + 1], sc.value[k],
                              sc.value[k + 1], 1e-12 * s.nozzle.L);
  const double lo = -s.nozzle.xi0, hi = s.nozzle.L - s.nozzle.xi0;
  if (!(r.x > lo && r.x < hi)) {
    std::ostringstream os;
    os << "root delta_xi=" << r.x << " is not strictly inside (" << lo << ", " << hi << ")";
    fail(ErrorKind::NoRoot, os.str());
  }
  return {r.x, sc.sign_changes, evals};
}

std::vector<double> update_front_slope(const GasModel& model,
                                       const std::vector<GasState>& u_plus_trace,
                                       const std::vector<GasState>& u_minus_trace,
                                       double p_jump_floor) {
  std::vector<double> slope(u_plus_trace.size());
  for (size_t j = 0; j < slope.size(); ++j) {
    const GasState& a = u_plus_trace[j];
    const GasState& b = u_minus_trace[j];
    const double jp = a.p - b.p;
    if (!(std::abs(jp) >= p_jump_floor)) {
      std::ostringstream os;
      os << "degenerate shock at node j=" << j << ": |[p]|=" << std::abs(jp)
         << " below floor " << p_jump_floor;
      fail(ErrorKind::DegenerateShock, os.str());
    }
    const double jv = derived(model, a).v_comp - derived(model, b).v_comp;
    slope[j] = jv / jp;
  }
  return slope;
}

namespace {

SolveReport planar_report(const ProblemSetup& s, const FixedDomainGrid& g, double pe) {
  if (pe != 0.0) {
    fail(ErrorKind::NoRoot,
         "at sigma = 0 the admissible Pe interval collapses; only Pe = 0 is accepted");
  }
  const BackgroundShock& bg = s.background;
  SolveReport r;
  r.converged = true;
  r.iterations_run = 1;
  r.fields = FieldSet::uniform(g, bg.u_plus_bar);
  r.front = make_front(s.nozzle.xi0, 0.0, std::vector<double>(g.ny + 1, 0.0), g.eta0);
  r.shock_trace.assign(g.ny + 1, bg.u_plus_bar);
  r.upstream_trace.assign(g.ny + 1, bg.u_minus_bar);
  r.iterations.push_back({0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0});
  r.hypotheses = check_hypotheses(s.model, r.fields, r.shock_trace, bg, 0.1);
  for (int j = 0; j <= g.ny; ++j) {
    r.diag.rh_residual_max = std::max(
        r.diag.rh_residual_max,
        rh_residuals(s.model, r.shock_trace[j], r.upstream_trace[j], 0.0).max_abs());
  }
  return r;
}

}  // namespace

SolveReport fixed_point_solve(const ProblemSetup& setup, double pe,
                              const FixedDomainGrid& grid_shape, const InitialGuess& init,
                              const SolverOptions& opts) {
  const GasModel& model = setup.model;
  const BackgroundShock& bg = setup.background;
  const double sigma = setup.sigma();
  const double L = setup.nozzle.L, xi0 = setup.nozzle.xi0;
  FixedDomainGrid grid = grid_shape;
  grid.xi0 = xi0;
  grid.L = L;
  grid.eta0 = setup.eta0();
  grid.validate();
  const int nx = grid.nx, ny = grid.ny;
  const double hy = grid.hy();

  if (sigma == 0.0) return planar_report(setup, grid, pe);

  // march past the exit by the widest excursion a capped front can make, so
  // the trace is never clamped while the scan moves the shock to xi* = L
  const double slope_cap = opts.slope_cap_factor * sigma;
  MarchGrid mg{0, ny, L + slope_cap * grid.eta0, grid.eta0};
  const int per_length = static_cast<int>(std::ceil(4.0 * nx * mg.xi_end / L));
  mg.nxi = opts.march_steps > 0 ? opts.march_steps
                                 : std::max(required_march_steps(bg, mg), per_length);
  SupersonicOptions sopt;
  sopt.corrections = opts.supersonic_corrections;
  sopt.exec = opts.exec;
  const InletTrace inlet = sample_inlet(setup, ny);
  SupersonicField sup = solve_linearized(model, bg, inlet, sigma, mg, sopt);

  // the reduced linear form gives the initial shock position and catches Pe
  // outside the admissible interval before any elliptic work
  SolvabilityContext lin_ctx;
  lin_ctx.setup = &setup;
  lin_ctx.pe = pe;
  const double linear_root = locate_shock(lin_ctx, opts.scan_points).delta_xi;

  double delta_xi = init.delta_xi.value_or(linear_root);
  std::vector<double> slope(ny + 1, init.psi_prime);
  FieldSet fields = init.fields ? *init.fields : FieldSet::uniform(grid, bg.u_plus_bar);
  fields.grid = grid;
  const double p_exit = bg.u_plus_bar.p + sigma * pe;
  const double c1 = c1_of(bg);

  auto check_front = [&](const ShockFront& front, int k) {
    for (int j = 0; j <= ny; ++j) {
      if (!(front.position[j] > 0.0 && front.position[j] < L) ||
          std::abs(front.slope[j]) > slope_cap) {
        std::ostringstream os;
        os << "shock front leaves the admissible set at iteration " << k << ", node j=" << j
           << " (eta=" << j * hy << "): psi=" << front.position[j]
           << ", psi'=" << front.slope[j] << " (cap " << slope_cap << ")";
        fail(ErrorKind::Hypothesis, os.str());
      }
    }
  };

  struct Pass {
    FieldSet next;
    std::vector<GasState> upstream, h3;
    double residual;
  };
  // elliptic problem on the domain behind `front`, coefficients frozen at `cur`
  auto elliptic_pass = [&](const ShockFront& front, const FieldSet& cur) {
    Pass ps;
    ps.upstream.resize(ny + 1);
    ps.h3.resize(ny + 1);
    for (int j = 0; j <= ny; ++j) {
      ps.upstream[j] = sup.trace(front.position[j], j);
      ps.h3[j] = h3_downstream(model, ps.upstream[j], front.slope[j], opts.tol_newton);
    }
    std::vector<double> s_row(ny + 1);
    for (int j = 0; j <= ny; ++j) s_row[j] = (L - front.position[j]) / (L - xi0);
    CoefficientInput cin{nx,           ny,          xi0,        L,
                         grid.hx(),    cur.p.data(), cur.theta.data(), cur.q.data(),
                         cur.s.data(), s_row.data(), front.position.data(), front.slope.data()};
    const CoefficientOutput co = evaluate_coefficients(opts.exec, model, cin);

    ThetaProblem pb;
    pb.grid = grid;
    pb.c11 = co.c11;
    pb.c12 = co.c12;
    pb.c22 = co.c22;
    pb.bottom.assign(nx + 1, 0.0);
    pb.top.assign(nx + 1, sigma);
    pb.shock_rows.assign(ny + 1, {});
    pb.exit_rows.assign(ny + 1, {});
    pb.tol = opts.tol_linear;
    pb.exec = opts.exec;
    for (int j = 1; j < ny; ++j) {
      const ExitCoeffs e = exit_oblique_coeffs(model, cur.at(nx, j));
      pb.exit_rows[j] = {-e.A_e / s_row[j], e.B_e, 0.0};
      const GasState uj = cur.at(0, j);
      const NormalizedShockRow r =
          normalized_shock_row(model, uj, ps.upstream[j], front.slope[j]);
      const double t = -front.slope[j] / s_row[j];
      const double pu = strong_arc_at_angle(model, ps.upstream[j + 1], uj.theta).p;
      const double pd = strong_arc_at_angle(model, ps.upstream[j - 1], uj.theta).p;
      pb.shock_rows[j] = {r.l_xi / s_row[j] + r.l_eta * t, r.l_eta, (pu - pd) / (2.0 * hy)};
    }
    const ThetaSolution th = solve_theta(pb);
    ps.residual = th.residual;
    ps.next.grid = grid;
    ps.next.theta = th.theta;
    ps.next.p = recover_p(grid, th.theta, co.c11, co.c12, co.c22, p_exit);
    QsFields qs = recover_q_s(model, grid, ps.next.p, ps.h3);
    ps.next.q = std::move(qs.q);
    ps.next.s = std::move(qs.s);
    return ps;
  };

  SolveReport rep;
  double prev_change = 0.0;
  SolvabilityContext ctx;
  for (int k = 0; k < opts.max_iters; ++k) {
    const ShockFront front = make_front(xi0, delta_xi, slope, grid.eta0);
    check_front(front, k);
    Pass ps = elliptic_pass(front, fields);

    // relocate with the feedback of this solve, then solve again on the moved
    // domain so the new fields and the new shock position belong together
    std::vector<double> theta_shock(ny + 1), gap(ny + 1);
    for (int j = 0; j <= ny; ++j) {
      theta_shock[j] = ps.next.theta[grid.idx(0, j)];
      gap[j] = p_exit - ps.next.p[grid.idx(0, j)];
    }
    ctx = SolvabilityContext{};
    ctx.setup = &setup;
    ctx.pe = pe;
    ctx.supersonic = &sup;
    ctx.theta_shock = theta_shock;
    ctx.slope = slope;
    ctx.feedback = (c1 * trapezoid(gap, hy) - sigma * (L - front.xi_star)) / sigma;
    double next_dxi = delta_xi;
    double residual = ps.residual;
    if (opts.relocate_shock) {
      next_dxi = locate_shock(ctx, opts.scan_points).delta_xi;
      const ShockFront moved = make_front(xi0, next_dxi, slope, grid.eta0);
      check_front(moved, k);
      ps = elliptic_pass(moved, fields);
      residual = std::max(residual, ps.residual);
    }

    rep.hypotheses = check_hypotheses(model, ps.next, ps.h3, bg, opts.eps_hyp, &front.position);
    require_hypotheses(rep.hypotheses);

    std::vector<GasState> u_plus(ny + 1);
    for (int j = 0; j <= ny; ++j)
      u_plus[j] = strong_arc_at_angle(model, ps.upstream[j], ps.next.theta[grid.idx(0, j)])
                      .downstream;
    const std::vector<double> next_slope =
        update_front_slope(model, u_plus, ps.upstream, 0.5 * bg.p_jump);

    IterationRecord rec{};
    rec.k = k;
    rec.change_fields = field_diff(ps.next, fields);
    rec.change_slope = slope_diff(next_slope, slope);
    rec.change_delta_xi = std::abs(next_dxi - delta_xi);
    rec.change = std::max({rec.change_fields, rec.change_slope, rec.change_delta_xi});
    rec.ratio = prev_change > 0.0 ? rec.change / prev_change : 0.0;
    rec.linear_residual = residual;
    rec.delta_xi = next_dxi;
    rep.iterations.push_back(rec);
    if (k > 0) rep.contraction_ratios.push_back(rec.ratio);
    prev_change = rec.change;

    fields = std::move(ps.next);
    slope = next_slope;
    delta_xi = next_dxi;
    rep.iterations_run = k + 1;
    if (rec.change <= opts.tol_fixed_point) {
      rep.converged = true;
      break;
    }
  }
  if (!rep.converged) {
    std::ostringstream os;
    os << "fixed point did not converge in " << opts.max_iters << " iterations; ratios:";
    for (double r : rep.contraction_ratios) os << " " << r;
    fail(ErrorKind::NonConvergence, os.str());
  }

  // final state and diagnostics
  rep.fields = fields;
  rep.front = make_front(xi0, delta_xi, slope, grid.eta0);
  rep.upstream_trace.resize(ny + 1);
  rep.shock_trace.resize(ny + 1);
  SolveDiagnostics& d = rep.diag;
  d.linear_root = linear_root;
  d.march_steps = mg.nxi;
  d.supersonic_passes = sup.passes;
  d.supersonic_pass_changes = sup.pass_changes;
  std::vector<double> mismatch(ny + 1);
  const double rm = bg.rho_minus, qm = bg.u_minus_bar.q;
  const double rp = bg.rho_plus, qp = bg.u_plus_bar.q;
  const double lhs_k = (bg.mach2_plus - 1.0) / (rp * qp * qp);
  const double rhs_k = (bg.mach2_minus - 1.0) / (rm * qm * qm) * (1.0 - bg.kappa);
  for (int j = 0; j <= ny; ++j) {
    const GasState um = sup.trace(rep.front.position[j], j);
    const GasState up = h3_downstream(model, um, slope[j], opts.tol_newton);
    rep.upstream_trace[j] = um;
    rep.shock_trace[j] = up;
    d.rh_residual_max = std::max(d.rh_residual_max, rh_residuals(model, up, um, slope[j]).max_abs());
    mismatch[j] = strong_arc_at_angle(model, um, fields.theta[grid.idx(0, j)]).p -
                  fields.p[grid.idx(0, j)];
    // linearized trace relation
    const double x = std::clamp(rep.front.position[j] / mg.dxi(), 0.0, double(mg.nxi));
    const int i = std::min(static_cast<int>(x), mg.nxi - 1);
    const double t = x - i;
    const double if3 = (1 - t) * sup.int_f3[sup.idx(i, j)] + t * sup.int_f3[sup.idx(i + 1, j)];
    const double rhs = rhs_k * (um.p - bg.u_minus_bar.p) +
                       bg.kappa1 * sigma * (inlet.p0[j] + rm * qm * inlet.q0[j]) +
                       bg.kappa2 * sigma * inlet.s0[j] + bg.kappa1 * if3;
    const double lhs = lhs_k * (up.p - bg.u_plus_bar.p);
    d.gammasp_remainder = std::max(d.gammasp_remainder, std::abs(lhs - rhs) / (sigma * sigma));
    if (j > 0 && j < ny) {
      const LiteralG lg = literal_g(model, bg, up, um);
      d.g_literal_max = std::max({d.g_literal_max, std::abs(lg.g1) / (sigma * sigma),
                                  std::abs(lg.g2) / (sigma * sigma),
                                  std::abs(lg.g3) / (sigma * sigma)});
    }
  }
  d.shock_pressure_mismatch = trapezoid(mismatch, hy) / grid.eta0;
  const ConservationAudit ca = audit_conservation(model, fields);
  d.max_ds_dxi = ca.max_ds_dxi;
  d.max_dB_dxi = ca.max_dB_dxi;
  {
    std::vector<double> s_row(ny + 1);
    for (int j = 0; j <= ny; ++j) s_row[j] = (L - rep.front.position[j]) / (L - xi0);
    CoefficientInput cin{nx, ny, xi0, L, grid.hx(), fields.p.data(), fields.theta.data(),
                         fields.q.data(), fields.s.data(), s_row.data(),
                         rep.front.position.data(), slope.data()};
    const CoefficientOutput co = evaluate_coefficients(opts.exec, model, cin);
    d.loop_mismatch = loop_mismatch(grid, fields.theta, co.c11, co.c12, co.c22);
  }
  d.pl0_residual = trace_and_integrals(sup, rep.front.xi_star).pl0_residual;
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i) {
      if (grid.in_corner_collar(i, j)) continue;
      const int n = grid.idx(i, j);
      d.sup_theta = std::max(d.sup_theta, std::abs(fields.theta[n]));
      d.sup_dp = std::max(d.sup_dp, std::abs(fields.p[n] - bg.u_plus_bar.p));
    }
  for (int j = 2; j <= ny - 2; ++j) d.sup_slope = std::max(d.sup_slope, std::abs(slope[j]));
  {
    // The change is a max over components of different size, and which one
    // dominates alternates, so single-step ratios swing. Two-step geometric
    // means are steady; take the largest over the unconverged tail. Step 1
    // leaves the uniform start and is not part of the tail.
    const auto& its = rep.iterations;
    for (size_t k = 2; k < its.size(); ++k) {
      if (its[k].change <= opts.tol_fixed_point) continue;
      d.max_step_ratio = std::max(d.max_step_ratio, its[k].ratio);
      if (k >= 3) d.tail_ratio = std::max(d.tail_ratio, std::sqrt(its[k].ratio * its[k - 1].ratio));
    }
    if (d.tail_ratio == 0.0 && !rep.contraction_ratios.empty())
      d.tail_ratio = rep.contraction_ratios.back();
  }
  if (rep.converged) {
    const double h = 1e-4 * L;
    d.f_tilde_slope = (solvability_f_tilde(ctx, delta_xi + h) -
                       solvability_f_tilde(ctx, delta_xi - h)) /
                      (2.0 * h);
  }
  rep.f_tilde_profile = scan_f_tilde(ctx, opts.profile_points, opts.exec);
  rep.supersonic = std::move(sup);
  // the context pointed into the local field; do not keep it
  return rep;
}

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Unique: return "Unique";
    case Verdict::MultipleRoots: return "MultipleRoots";
    case Verdict::SeedDisagreement: return "SeedDisagreement";
    case Verdict::RegimeBreach: return "RegimeBreach";
  }
  return "?";
}

UniquenessReport uniqueness_sweep(const ProblemSetup& setup, double pe,
                                  const FixedDomainGrid& grid_shape, const SweepOptions& sweep,
                                  const SolverOptions& opts_in) {
  const int n = std::max(sweep.n_seeds, 1);
  const double sigma = setup.sigma();
  const double L = setup.nozzle.L, xi0 = setup.nozzle.xi0;
  const double slopes[5] = {0.0, sigma, -sigma, 2.0 * sigma, -2.0 * sigma};
  UniquenessReport out;
  out.seeds.resize(n);
  SolverOptions opts = opts_in;
  opts.exec = Exec::Serial;

#pragma omp parallel for schedule(dynamic) num_threads(kernel_threads())
  for (int i = 0; i < n; ++i) {
    SeedResult& r = out.seeds[i];
    r.index = i;
    r.psi_prime0 = slopes[i % 5];
    r.delta_xi0 = -xi0 + L * (i + 1) / (n + 1);
    InitialGuess g;
    g.psi_prime = r.psi_prime0;
    g.delta_xi = r.delta_xi0;
    SolverOptions o = opts;
    if (i < static_cast<int>(sweep.frozen_delta_xi.size())) {
      g.delta_xi = sweep.frozen_delta_xi[i];
      o.relocate_shock = false;
    }
    try {
      r.report = fixed_point_solve(setup, pe, grid_shape, g, o);
      r.ok = r.report.converged;
      r.delta_xi = r.report.front.delta_xi;
      r.iterations = r.report.iterations_run;
      r.tail_ratio = r.report.diag.tail_ratio;
    } catch (const Error& e) {
      r.ok = false;
      r.error_kind = kind_name(e.kind());
      r.error = e.what();
    } catch (const std::exception& e) {
      r.ok = false;
      r.error_kind = "solver";
      r.error = e.what();
    }
  }

  const SeedResult* ref = nullptr;
  bool any_fail = false;
  for (const auto& r : out.seeds) {
    if (r.ok && !ref) ref = &r;
    if (!r.ok) any_fail = true;
  }
  if (any_fail || !ref) {
    out.verdict = Verdict::RegimeBreach;
    std::ostringstream os;
    for (const auto& r : out.seeds)
      if (!r.ok) os << "seed " << r.index << ": " << r.error_kind << "; ";
    out.note = os.str();
    return out;
  }
  for (const auto& r : out.seeds) {
    out.delta_xi_spread = std::max(out.delta_xi_spread, std::abs(r.delta_xi - ref->delta_xi));
    out.field_spread = std::max(out.field_spread, field_diff(r.report.fields, ref->report.fields));
  }
  out.scan = ref->report.f_tilde_profile;
  out.scan_sign_changes = out.scan.sign_changes;
  out.scan_ascending_pairs = out.scan.ascending_pairs;
  if (out.scan_sign_changes > 1) {
    out.verdict = Verdict::MultipleRoots;
  } else if (out.scan_sign_changes == 0) {
    out.verdict = Verdict::RegimeBreach;
    out.note = "F has no sign change on the 256-point scan";
  } else if (out.delta_xi_spread > 1e-6 * L ||
             out.field_spread > 10.0 * opts.tol_fixed_point) {
    out.verdict = Verdict::SeedDisagreement;
  } else {
    out.verdict = Verdict::Unique;
  }
  return out;
}

}  // namespace nozzle
