#include "nozzle/subsonic.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "nozzle/errors.hpp"

namespace nozzle {

void FixedDomainGrid::validate() const {
  std::ostringstream os;
  if (nx < 8 || ny < 8) os << "grid needs nx, ny >= 8 (got " << nx << "x" << ny << ")";
  else if (!(L > xi0)) os << "grid needs L > xi0";
  else if (!(eta0 > 0.0)) os << "grid needs eta0 > 0";
  if (!os.str().empty()) fail(ErrorKind::Grid, os.str());
}

bool FixedDomainGrid::in_corner_collar(int i, int j) const {
  const bool near_i = i <= 1 || i >= nx - 1;
  const bool near_j = j <= 1 || j >= ny - 1;
  return near_i && near_j;
}

FieldSet FieldSet::uniform(const FixedDomainGrid& g, const GasState& u) {
  FieldSet f;
  f.grid = g;
  f.p.assign(g.size(), u.p);
  f.theta.assign(g.size(), u.theta);
  f.q.assign(g.size(), u.q);
  f.s.assign(g.size(), u.s);
  return f;
}

GasState FieldSet::at(int i, int j) const {
  const int n = grid.idx(i, j);
  return {p[n], theta[n], q[n], s[n]};
}

namespace {

struct Local {
  double rho, m2, ct, st, den;
};

Local local_of(const GasModel& model, const GasState& u, const char* who) {
  const DerivedState d = derived(model, u);
  Local l{d.rho, d.mach * d.mach, std::cos(u.theta), std::sin(u.theta), 0.0};
  if (!(l.m2 < 1.0) || !(l.ct > 0.0)) {
    std::ostringstream os;
    os << who << ": ellipticity lost (M^2=" << l.m2 << ", cos(theta)=" << l.ct << ")";
    fail(ErrorKind::Hypothesis, os.str());
  }
  l.den = (1.0 - l.m2) * l.ct;
  return l;
}

}  // namespace

ThetaCoefficients theta_coefficients(const GasModel& model, const GasState& u) {
  const Local l = local_of(model, u, "theta_coefficients");
  const double q = u.q;
  ThetaCoefficients c{};
  c.a11 = q * (1.0 - l.m2 * l.ct * l.ct) / l.den;
  c.a12 = -l.rho * q * q * l.st / l.den;
  c.a22 = l.rho * l.rho * q * q * q / l.den;
  const double tr = 0.5 * (c.a11 + c.a22);
  const double dd = std::sqrt(0.25 * (c.a11 - c.a22) * (c.a11 - c.a22) + c.a12 * c.a12);
  c.lambda_lower = tr - dd;
  if (!(c.lambda_lower > 0.0)) {
    fail(ErrorKind::Hypothesis, "theta_coefficients: coefficient matrix not positive definite");
  }
  return c;
}

ExitCoeffs exit_oblique_coeffs(const GasModel& model, const GasState& u) {
  const Local l = local_of(model, u, "exit_oblique_coeffs");
  return {u.q * (1.0 - l.m2 * l.ct * l.ct) / l.den, l.rho * u.q * u.q * l.st / l.den};
}

ShockCoeffs shock_oblique_coeffs(const GasModel& model, const GasState& u_plus,
                                 const GasState& u_minus, double psi_slope,
                                 const std::array<double, 4>& du_minus_deta,
                                 double eps_p) {
  const PolarCriticalPoints cp = polar_critical_points(model, u_minus);
  if (!(u_plus.p > cp.p_star + eps_p)) {
    std::ostringstream os;
    os << "shock pressure " << u_plus.p << " is not above p_star + eps = "
       << cp.p_star + eps_p;
    fail(ErrorKind::Hypothesis, os.str());
  }
  const Local l = local_of(model, u_plus, "shock_oblique_coeffs");
  const PolarBranch br =
      u_plus.theta >= u_minus.theta ? PolarBranch::Upper : PolarBranch::Lower;
  const H1Eval h = h1_residual_and_gradient(model, u_plus.theta, u_plus.p, u_minus, br);
  const double q = u_plus.q, rho = l.rho, ps = psi_slope;
  const double w = 1.0 + ps * ps;
  ShockCoeffs c{};
  c.d_theta = h.d_theta;
  c.d_p = h.d_p;
  c.A_s = q * ((ps * rho * q + l.st) * (ps * rho * q + l.st) + (1.0 - l.m2) * l.ct * l.ct) *
          h.d_p / (w * l.den);
  c.B_s = h.d_theta + q *
                          (rho * q * (1.0 - ps * ps) * l.st +
                           ps * (rho * rho * q * q - 1.0 + l.m2 * l.ct * l.ct)) *
                          h.d_p / (w * l.den);
  c.l1 = -ps * h.d_theta + q * (ps * rho * q * l.st + 1.0 - l.m2 * l.ct * l.ct) * h.d_p / l.den;
  c.l2 = -h.d_theta - q * (ps * rho * rho * q * q + rho * q * l.st) * h.d_p / l.den;
  // tangential derivative along tau_s = (-psi', -1)/sqrt(w)
  const std::array<double, 4> grad = h1_upstream_gradient(model, u_plus.theta, u_plus.p, u_minus, br);
  double dot = 0.0;
  for (int k = 0; k < 4; ++k) dot += grad[k] * (-du_minus_deta[k] / std::sqrt(w));
  c.f_s = -dot;
  c.as_positive = c.A_s > 0.0;
  return c;
}

NormalizedShockRow normalized_shock_row(const GasModel& model, const GasState& u_plus,
                                        const GasState& u_minus, double psi_slope) {
  const Local l = local_of(model, u_plus, "normalized_shock_row");
  const double q = u_plus.q, rho = l.rho, ps = psi_slope;
  const ArcPoint arc = strong_arc_at_angle(model, u_minus, u_plus.theta);
  NormalizedShockRow r{};
  r.p_theta = arc.dp_dtheta;
  // (psi', 1) K / ((1 - M^2) cos(theta)) - P_theta (psi', 1)
  r.l_xi = (-ps * rho * q * q * l.st - q * (1.0 - l.m2 * l.ct * l.ct)) / l.den - r.p_theta * ps;
  r.l_eta = (ps * rho * rho * q * q * q + rho * q * q * l.st) / l.den - r.p_theta;
  return r;
}

ThetaSolution solve_theta(const ThetaProblem& pb) {
  const FixedDomainGrid& g = pb.grid;
  g.validate();
  const int nx = g.nx, ny = g.ny, N = g.size();
  const double hx = g.hx(), hy = g.hy();
  if (static_cast<int>(pb.c11.size()) != N || static_cast<int>(pb.bottom.size()) != nx + 1 ||
      static_cast<int>(pb.top.size()) != nx + 1 ||
      static_cast<int>(pb.shock_rows.size()) != ny + 1 ||
      static_cast<int>(pb.exit_rows.size()) != ny + 1) {
    fail(ErrorKind::Solver, "solve_theta: inconsistent problem sizes");
  }
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(9 * N);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(N);

  for (int i = 0; i <= nx; ++i) {
    trip.emplace_back(g.idx(i, 0), g.idx(i, 0), 1.0);
    b[g.idx(i, 0)] = pb.bottom[i];
    trip.emplace_back(g.idx(i, ny), g.idx(i, ny), 1.0);
    b[g.idx(i, ny)] = pb.top[i];
  }
  for (int j = 1; j < ny; ++j) {
    const ObliqueRow& s = pb.shock_rows[j];
    const int r = g.idx(0, j);
    trip.emplace_back(r, g.idx(0, j), -3.0 * s.cx / (2.0 * hx));
    trip.emplace_back(r, g.idx(1, j), 4.0 * s.cx / (2.0 * hx));
    trip.emplace_back(r, g.idx(2, j), -s.cx / (2.0 * hx));
    trip.emplace_back(r, g.idx(0, j + 1), s.cy / (2.0 * hy));
    trip.emplace_back(r, g.idx(0, j - 1), -s.cy / (2.0 * hy));
    b[r] = s.rhs;
    const ObliqueRow& e = pb.exit_rows[j];
    const int re = g.idx(nx, j);
    trip.emplace_back(re, g.idx(nx, j), 3.0 * e.cx / (2.0 * hx));
    trip.emplace_back(re, g.idx(nx - 1, j), -4.0 * e.cx / (2.0 * hx));
    trip.emplace_back(re, g.idx(nx - 2, j), e.cx / (2.0 * hx));
    trip.emplace_back(re, g.idx(nx, j + 1), e.cy / (2.0 * hy));
    trip.emplace_back(re, g.idx(nx, j - 1), -e.cy / (2.0 * hy));
    b[re] = e.rhs;
  }
  const StencilRows rows =
      assemble_interior(pb.exec, nx, ny, hx, hy, pb.c11.data(), pb.c12.data(), pb.c22.data());
  for (size_t k = 0; k < rows.row.size(); ++k)
    trip.emplace_back(rows.row[k], rows.col[k], rows.val[k]);
  if (!pb.source.empty()) {
    for (int j = 1; j < ny; ++j)
      for (int i = 1; i < nx; ++i) b[g.idx(i, j)] = pb.source[g.idx(i, j)];
  }

  Eigen::SparseMatrix<double> A(N, N);
  A.setFromTriplets(trip.begin(), trip.end());
  A.makeCompressed();
  Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
  lu.analyzePattern(A);
  lu.factorize(A);
  if (lu.info() != Eigen::Success) {
    fail(ErrorKind::Solver, "solve_theta: sparse LU factorization failed: " + lu.lastErrorMessage());
  }
  Eigen::VectorXd x = lu.solve(b);
  if (lu.info() != Eigen::Success || !x.allFinite()) {
    fail(ErrorKind::Solver, "solve_theta: sparse LU solve failed");
  }
  const Eigen::VectorXd r = A * x - b;
  double anorm = 0.0;
  {
    Eigen::VectorXd rowsum = Eigen::VectorXd::Zero(N);
    for (int k = 0; k < A.outerSize(); ++k)
      for (Eigen::SparseMatrix<double>::InnerIterator it(A, k); it; ++it)
        rowsum[it.row()] += std::abs(it.value());
    anorm = rowsum.maxCoeff();
  }
  const double scale = anorm * x.cwiseAbs().maxCoeff() + b.cwiseAbs().maxCoeff();
  ThetaSolution sol;
  sol.residual = scale > 0.0 ? r.cwiseAbs().maxCoeff() / scale : 0.0;
  if (!(sol.residual <= pb.tol)) {
    std::ostringstream os;
    os << "solve_theta: linear residual " << sol.residual << " above tolerance " << pb.tol;
    fail(ErrorKind::Solver, os.str());
  }
  sol.theta.assign(x.data(), x.data() + N);
  return sol;
}

namespace {

// d theta / dY at a node, 2nd order
double theta_y(const FixedDomainGrid& g, const std::vector<double>& th, int i, int j) {
  const double h = g.hy();
  if (j == 0)
    return (-3.0 * th[g.idx(i, 0)] + 4.0 * th[g.idx(i, 1)] - th[g.idx(i, 2)]) / (2.0 * h);
  if (j == g.ny)
    return (3.0 * th[g.idx(i, j)] - 4.0 * th[g.idx(i, j - 1)] + th[g.idx(i, j - 2)]) / (2.0 * h);
  return (th[g.idx(i, j + 1)] - th[g.idx(i, j - 1)]) / (2.0 * h);
}

double theta_x(const FixedDomainGrid& g, const std::vector<double>& th, int i, int j) {
  const double h = g.hx();
  if (i == 0)
    return (-3.0 * th[g.idx(0, j)] + 4.0 * th[g.idx(1, j)] - th[g.idx(2, j)]) / (2.0 * h);
  if (i == g.nx)
    return (3.0 * th[g.idx(i, j)] - 4.0 * th[g.idx(i - 1, j)] + th[g.idx(i - 2, j)]) / (2.0 * h);
  return (th[g.idx(i + 1, j)] - th[g.idx(i - 1, j)]) / (2.0 * h);
}

// d_X p on the face (i+1/2, j)
double flux_x(const FixedDomainGrid& g, const std::vector<double>& th,
              const std::vector<double>& c12, const std::vector<double>& c22, int i, int j) {
  const int a = g.idx(i, j), b = g.idx(i + 1, j);
  const double tx = (th[b] - th[a]) / g.hx();
  const double ty = 0.5 * (theta_y(g, th, i, j) + theta_y(g, th, i + 1, j));
  return 0.5 * (c12[a] + c12[b]) * tx + 0.5 * (c22[a] + c22[b]) * ty;
}

// d_Y p on the face (i, j+1/2)
double flux_y(const FixedDomainGrid& g, const std::vector<double>& th,
              const std::vector<double>& c11, const std::vector<double>& c12, int i, int j) {
  const int a = g.idx(i, j), b = g.idx(i, j + 1);
  const double ty = (th[b] - th[a]) / g.hy();
  const double tx = 0.5 * (theta_x(g, th, i, j) + theta_x(g, th, i, j + 1));
  return -(0.5 * (c11[a] + c11[b]) * tx + 0.5 * (c12[a] + c12[b]) * ty);
}

}  // namespace

std::vector<double> recover_p(const FixedDomainGrid& g, const std::vector<double>& theta,
                              const std::vector<double>& c11,
                              const std::vector<double>& c12,
                              const std::vector<double>& c22, double exit_value) {
  (void)c11;
  std::vector<double> p(g.size(), 0.0);
  for (int j = 0; j <= g.ny; ++j) {
    p[g.idx(g.nx, j)] = exit_value;
    for (int i = g.nx - 1; i >= 0; --i)
      p[g.idx(i, j)] = p[g.idx(i + 1, j)] - g.hx() * flux_x(g, theta, c12, c22, i, j);
  }
  return p;
}

double loop_mismatch(const FixedDomainGrid& g, const std::vector<double>& theta,
                     const std::vector<double>& c11, const std::vector<double>& c12,
                     const std::vector<double>& c22) {
  double worst = 0.0;
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      if (g.in_corner_collar(i, j) || g.in_corner_collar(i + 1, j + 1) ||
          g.in_corner_collar(i + 1, j) || g.in_corner_collar(i, j + 1))
        continue;
      const double circ = g.hx() * (flux_x(g, theta, c12, c22, i, j) -
                                    flux_x(g, theta, c12, c22, i, j + 1)) +
                          g.hy() * (flux_y(g, theta, c11, c12, i + 1, j) -
                                    flux_y(g, theta, c11, c12, i, j));
      worst = std::max(worst, std::abs(circ) / (g.hx() * g.hy()));
    }
  }
  return worst;
}

QsFields recover_q_s(const GasModel& model, const FixedDomainGrid& g,
                     const std::vector<double>& p,
                     const std::vector<GasState>& shock_states) {
  if (static_cast<int>(shock_states.size()) != g.ny + 1)
    fail(ErrorKind::Solver, "recover_q_s: shock trace size does not match grid");
  QsFields out;
  out.q.assign(g.size(), 0.0);
  out.s.assign(g.size(), 0.0);
  for (int j = 0; j <= g.ny; ++j) {
    const GasState& u = shock_states[j];
    const double B = derived(model, u).bernoulli_B;
    for (int i = 0; i <= g.nx; ++i) {
      const int n = g.idx(i, j);
      if (!(p[n] > 0.0)) {
        std::ostringstream os;
        os << "non-positive pressure " << p[n] << " at node (" << i << ", " << j << ")";
        fail(ErrorKind::Hypothesis, os.str());
      }
      const double q2 = 2.0 * (B - enthalpy(model, p[n], u.s));
      if (!(q2 > 0.0)) {
        std::ostringstream os;
        os << "Bernoulli inversion failed (q^2=" << q2 << ") at node (" << i << ", " << j << ")";
        fail(ErrorKind::Hypothesis, os.str());
      }
      out.s[n] = u.s;
      out.q[n] = std::sqrt(q2);
    }
  }
  return out;
}

ConservationAudit audit_conservation(const GasModel& model, const FieldSet& f) {
  const FixedDomainGrid& g = f.grid;
  ConservationAudit a{0.0, 0.0};
  for (int j = 0; j <= g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const GasState u0 = f.at(i, j), u1 = f.at(i + 1, j);
      a.max_ds_dxi = std::max(a.max_ds_dxi, std::abs(u1.s - u0.s) / g.hx());
      const double B0 = derived(model, u0).bernoulli_B, B1 = derived(model, u1).bernoulli_B;
      a.max_dB_dxi = std::max(a.max_dB_dxi, std::abs(B1 - B0) / g.hx());
    }
  }
  return a;
}

std::string HypothesisReport::describe() const {
  std::ostringstream os;
  os << "regime check (eps=" << eps << "):";
  if (!mach_ok)
    os << " M^2=" << max_mach2 << " > 1-eps at node (i=" << worst_mach.i << ", j="
       << worst_mach.j << ", xi=" << worst_mach.xi << ", eta=" << worst_mach.eta << ");";
  if (!u_ok)
    os << " u=" << min_u << " <= 0 at node (i=" << worst_u.i << ", j=" << worst_u.j
       << ", xi=" << worst_u.xi << ", eta=" << worst_u.eta << ");";
  if (!pressure_ok)
    os << " shock pressure margin p - (p_star + eps) = " << min_pressure_margin
       << " at shock node j=" << worst_pressure.j << " (xi=" << worst_pressure.xi
       << ", eta=" << worst_pressure.eta << ");";
  if (pass()) os << " all pass";
  return os.str();
}

HypothesisReport check_hypotheses(const GasModel& model, const FieldSet& f,
                                  const std::vector<GasState>& shock_trace,
                                  const BackgroundShock& bg, double eps,
                                  const std::vector<double>* shock_xi) {
  const FixedDomainGrid& g = f.grid;
  HypothesisReport r;
  r.eps = eps;
  r.p_star_bar = bg.polar.p_star;
  r.max_mach2 = -1.0;
  r.min_u = 1e300;
  for (int j = 0; j <= g.ny; ++j) {
    for (int i = 0; i <= g.nx; ++i) {
      const GasState u = f.at(i, j);
      const double m2 = mach_squared(model, u);
      const double uc = u.q * std::cos(u.theta);
      if (m2 > r.max_mach2) {
        r.max_mach2 = m2;
        r.worst_mach = {i, j, g.X(i), g.Y(j)};
      }
      if (uc < r.min_u) {
        r.min_u = uc;
        r.worst_u = {i, j, g.X(i), g.Y(j)};
      }
    }
  }
  r.mach_ok = r.max_mach2 <= 1.0 - eps;
  r.u_ok = r.min_u > 0.0;
  r.min_pressure_margin = 1e300;
  for (int j = 0; j < static_cast<int>(shock_trace.size()); ++j) {
    const double m = shock_trace[j].p - (bg.polar.p_star + eps);
    if (m < r.min_pressure_margin) {
      r.min_pressure_margin = m;
      const double xi = shock_xi ? (*shock_xi)[j] : g.xi0;
      r.worst_pressure = {0, j, xi, g.Y(std::min(j, g.ny))};
    }
  }
  r.pressure_ok = shock_trace.empty() || r.min_pressure_margin >= 0.0;
  return r;
}

void require_hypotheses(const HypothesisReport& rep) {
  if (!rep.pass()) fail(ErrorKind::Hypothesis, "outside uniqueness regime: " + rep.describe());
}

}  // namespace nozzle
