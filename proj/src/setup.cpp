#include "nozzle/setup.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "nozzle/errors.hpp"

namespace nozzle {

namespace {

double simpson(const std::function<double(double)>& f, double a, double b, int n) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

Quadrature simpson_doubling(const std::function<double(double)>& f, double a,
                            double b, double rel_tol) {
  int n = 64;
  double prev = simpson(f, a, b, n);
  for (;;) {
    const double next = simpson(f, a, b, 2 * n);
    const double err = std::abs(next - prev);
    n *= 2;
    if (err <= rel_tol * std::abs(next) || err < 1e-300 || n >= (1 << 20)) {
      return {next, err, n};
    }
    prev = next;
  }
}

}  // namespace

void NozzleSpec::validate(bool force) const {
  std::ostringstream os;
  if (!(L > 0.0)) os << "L must be positive (got " << L << ")";
  else if (!(xi0 > 0.0 && xi0 < L)) os << "xi0 must lie in (0, L) (got " << xi0 << ")";
  else if (!(sigma >= 0.0)) os << "sigma must be >= 0 (got " << sigma << ")";
  else if (sigma > sigma_cap && !force)
    os << "sigma=" << sigma << " exceeds sigma_cap=" << sigma_cap
       << " (use --force to override)";
  if (!os.str().empty()) fail(ErrorKind::Config, os.str());
}

GasState upstream_state(const GasModel& model, double p, double rho, double mach) {
  if (!(p > 0.0) || !(rho > 0.0) || !(mach > 0.0)) {
    fail(ErrorKind::Config, "upstream p, rho and Mach must be positive");
  }
  const double c = std::sqrt(model.gamma * p / rho);
  return state_from_density(model, p, rho, mach * c, 0.0);
}

BackgroundShock build_background(const GasModel& model, const GasState& u_minus_bar) {
  model.validate();
  BackgroundShock bg{};
  bg.u_minus_bar = u_minus_bar;
  bg.u_plus_bar = normal_shock_downstream(model, u_minus_bar);
  const DerivedState dm = derived(model, bg.u_minus_bar);
  const DerivedState dp = derived(model, bg.u_plus_bar);
  bg.rho_minus = dm.rho;
  bg.rho_plus = dp.rho;
  bg.c_minus = dm.c;
  bg.c_plus = dp.c;
  bg.mach2_minus = dm.mach * dm.mach;
  bg.mach2_plus = dp.mach * dp.mach;
  bg.p_jump = bg.u_plus_bar.p - bg.u_minus_bar.p;

  const double g = model.gamma;
  const double pp = bg.u_plus_bar.p;
  const double qm = bg.u_minus_bar.q, qp = bg.u_plus_bar.q;
  bg.kappa = ((g - 1.0) / (g * pp) + 1.0 / (bg.rho_plus * qp * qp)) * bg.p_jump;
  bg.kappa1 = -1.0 / (bg.rho_minus * qm * qm) *
                  (bg.kappa + bg.p_jump / (bg.rho_plus * qp * qp)) -
              (g - 1.0) / (g * pp) * (1.0 - bg.rho_plus / bg.rho_minus);
  bg.kappa2 = 1.0 / (g * model.c_v) *
              (bg.kappa + (bg.c_minus * bg.c_minus - bg.c_plus * bg.c_plus) /
                              (bg.c_plus * bg.c_plus));
  if (!(bg.kappa > 0.0)) {
    fail(ErrorKind::Domain, "background kappa is not positive: " +
                                std::to_string(bg.kappa));
  }
  bg.polar = polar_critical_points(model, u_minus_bar);
  return bg;
}

Quadrature mass_flux_width(const GasModel& model, const InletProfile& inlet,
                           double rel_tol) {
  auto g = [&](double x) {
    const GasState u = inlet(x);
    return model.density(u.p, u.s) * u.q * std::cos(u.theta);
  };
  return simpson_doubling(g, 0.0, 1.0, rel_tol);
}

InletMap::InletMap(const GasModel& model, const InletProfile& inlet, int n)
    : model_(model), inlet_(inlet) {
  auto g = [&](double x) {
    const GasState u = inlet(x);
    const double v = model.density(u.p, u.s) * u.q * std::cos(u.theta);
    if (!(v > 0.0)) fail(ErrorKind::Domain, "inlet mass flux density is not positive");
    return v;
  };
  x_.resize(n + 1);
  eta_.resize(n + 1);
  g_.resize(n + 1);
  for (int i = 0; i <= n; ++i) {
    x_[i] = static_cast<double>(i) / n;
    g_[i] = g(x_[i]);
  }
  eta_[0] = 0.0;
  for (int i = 0; i < n; ++i) {
    const double gm = g(0.5 * (x_[i] + x_[i + 1]));
    eta_[i + 1] = eta_[i] + (x_[i + 1] - x_[i]) / 6.0 * (g_[i] + 4.0 * gm + g_[i + 1]);
  }
  eta0_ = mass_flux_width(model, inlet).value;
  eta_[n] = eta0_;
}

double InletMap::flux_density(double x2) const {
  const GasState u = inlet_(std::clamp(x2, 0.0, 1.0));
  return model_.density(u.p, u.s) * u.q * std::cos(u.theta);
}

double InletMap::y0(double eta) const {
  if (eta <= 0.0) return 0.0;
  if (eta >= eta0_) return 1.0;
  const auto it = std::upper_bound(eta_.begin(), eta_.end(), eta);
  const int i = std::max(0, static_cast<int>(it - eta_.begin()) - 1);
  const double h = eta_[i + 1] - eta_[i];
  const double t = (eta - eta_[i]) / h;
  // cubic Hermite with exact slopes dx/deta = 1/g
  double m0 = h / g_[i], m1 = h / g_[i + 1];
  const double dx = x_[i + 1] - x_[i];
  // Fritsch-Carlson limiter keeps the inverse monotone
  const double a = m0 / dx, b = m1 / dx;
  if (a * a + b * b > 9.0) {
    const double tau = 3.0 / std::sqrt(a * a + b * b);
    m0 *= tau;
    m1 *= tau;
  }
  const double t2 = t * t, t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * x_[i] + (t3 - 2 * t2 + t) * m0 +
         (-2 * t3 + 3 * t2) * x_[i + 1] + (t3 - t2) * m1;
}

double InletMap::eta_of(double x2) const {
  const int n = static_cast<int>(x_.size()) - 1;
  x2 = std::clamp(x2, 0.0, 1.0);
  const int i = std::min(static_cast<int>(x2 * n), n - 1);
  const double dx = x_[i + 1] - x_[i];
  const double t = (x2 - x_[i]) / dx;
  const double t2 = t * t, t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * eta_[i] + (t3 - 2 * t2 + t) * dx * g_[i] +
         (-2 * t3 + 3 * t2) * eta_[i + 1] + (t3 - t2) * dx * g_[i + 1];
}

GasState ProblemSetup::inlet_state(double x2) const {
  const GasState& b = background.u_minus_bar;
  const double s = nozzle.sigma;
  return {b.p + s * inflow.p0(x2), b.theta + s * inflow.theta0(x2),
          b.q + s * inflow.q0(x2), b.s + s * inflow.s0(x2)};
}

GasState ProblemSetup::perturbation_at_eta(double eta) const {
  const double x = inlet.y0(eta);
  return {inflow.p0(x), inflow.theta0(x), inflow.q0(x), inflow.s0(x)};
}

PeInterval admissible_pe_interval(const GasModel& model, const BackgroundShock& bg,
                                  const InflowPerturbation& inflow,
                                  const InletMap& inlet, double L) {
  (void)model;
  PeInterval pe{};
  const double rp = bg.rho_plus, qp = bg.u_plus_bar.q;
  const double rm = bg.rho_minus, qm = bg.u_minus_bar.q;
  pe.prefactor = (1.0 - bg.mach2_plus) / (rp * rp * qp * qp * qp) * inlet.eta0();

  const double cp = bg.kappa1 + (1.0 - bg.kappa) * (bg.mach2_minus - 1.0) / (rm * qm * qm);
  // integrals over eta, substituted to x2 so the Jacobian is the flux density
  const bool zero = inflow.p0.is_zero() && inflow.q0.is_zero() && inflow.s0.is_zero();
  double d_int = 0.0, lit = 0.0;
  if (!zero) {
    auto consistent = [&](double x) {
      return (cp * inflow.p0(x) + bg.kappa1 * rm * qm * inflow.q0(x) +
              bg.kappa2 * inflow.s0(x)) *
             inlet.flux_density(x);
    };
    auto literal = [&](double x) {
      const double p0 = inflow.p0(x);
      return ((1.0 - bg.kappa) * p0 -
              (bg.kappa1 * (p0 + rm * qm * inflow.q0(x)) + bg.kappa2 * inflow.s0(x)) /
                  (rm * qm)) *
             inlet.flux_density(x);
    };
    d_int = simpson_doubling(consistent, 0.0, 1.0, 1e-12).value;
    lit = simpson_doubling(literal, 0.0, 1.0, 1e-12).value;
  }
  pe.g_script = 0.0 - d_int / (rp * qp);  // no negative zero in reports
  pe.g_script_literal = lit;
  pe.scaled_lo = (1.0 - bg.kappa) * L + pe.g_script;
  pe.scaled_hi = L + pe.g_script;
  pe.lo = pe.scaled_lo / pe.prefactor;
  pe.hi = pe.scaled_hi / pe.prefactor;
  return pe;
}

bool CompatibilityReport::all_pass() const {
  return std::all_of(entries.begin(), entries.end(),
                     [](const CompatibilityEntry& e) { return e.pass; });
}

bool CompatibilityReport::derivative_conditions_pass() const {
  for (const auto& e : entries) {
    if (e.name.rfind("CC0", 0) == 0) continue;
    if (!e.pass) return false;
  }
  return true;
}

CompatibilityReport validate_compatibility(const GasModel& model,
                                           const BackgroundShock& bg,
                                           const InflowPerturbation& in,
                                           double sigma, double tol) {
  for (const Profile* p : {&in.p0, &in.theta0, &in.q0, &in.s0}) {
    if (p->samples().size() < 4) fail(ErrorKind::Input, "profile has too few samples");
  }
  CompatibilityReport rep;
  auto add = [&](std::string name, double r, std::string note = "") {
    rep.entries.push_back({std::move(name), std::abs(r) <= tol, r, tol, std::move(note)});
  };
  const GasState& b = bg.u_minus_bar;
  auto state_at = [&](double x) {
    return GasState{b.p + sigma * in.p0(x), b.theta + sigma * in.theta0(x),
                    b.q + sigma * in.q0(x), b.s + sigma * in.s0(x)};
  };
  const GasState u0 = state_at(0.0), u1 = state_at(1.0);
  const double m2_0 = mach_squared(model, u0), m2_1 = mach_squared(model, u1);
  const double rho1 = model.density(u1.p, u1.s);
  const double g = model.gamma;

  add("CC0_theta0_at_0", in.theta0(0.0));
  if (sigma == 0.0) {
    rep.entries.push_back({"CC0_theta0_at_1", true, in.theta0(1.0) - 1.0, tol,
                           "waived at sigma = 0"});
  } else {
    add("CC0_theta0_at_1", in.theta0(1.0) - 1.0,
        "enforced as theta0(1) = 1 so that the inlet angle sigma*theta0(1) matches "
        "the wall angle sigma; the printed condition theta0(1) = sigma is "
        "inconsistent with the wall condition");
  }
  add("CC1_p0_slope_at_0", in.p0.d1_left());

  const double tp0 = in.theta0.d1_right(), pp0 = in.p0.d1_right();
  const double tan_s = std::tan(sigma);
  if (sigma == 0.0) {
    // multiplied through by tan(sigma)
    add("CC1_corner_at_1", (m2_1 - 1.0) / (rho1 * u1.q * u1.q) * pp0,
        "evaluated as tan(sigma)*theta0'(1) + (M^2-1)/(rho q^2) p0'(1) at sigma = 0");
  } else {
    add("CC1_corner_at_1", tp0 + (m2_1 - 1.0) / (rho1 * u1.q * u1.q * tan_s) * pp0);
  }

  const double k0 = 1.0 / (g * model.c_v);
  add("CC2_at_0", (m2_0 - 1.0) * in.theta0.d2_left() +
                      (k0 * in.s0.d1_left() - 2.0 / u0.q * in.q0.d1_left()) *
                          in.theta0.d1_left());

  const double sin_s = std::sin(sigma), cos_s = std::cos(sigma);
  const double m4 = m2_1 * m2_1;
  const double mhat = m2_1 - 1.0 - g * m4 * sin_s * sin_s +
                      m2_1 * (1.0 + m4 - 2.0 * m2_1) * cos_s * cos_s;
  const double w = m2_1 - 1.0 + tan_s * tan_s;
  const double cc2 = w * in.theta0.d2_right() +
                     2.0 * (m2_1 - 1.0) * tan_s / (rho1 * u1.q * u1.q) * in.p0.d2_right() +
                     w / (m2_1 - 1.0) *
                         (k0 * in.s0.d1_right() - 2.0 / u1.q * in.q0.d1_right()) * tp0 +
                     2.0 * mhat * sin_s /
                         ((m2_1 - 1.0) * (m2_1 - 1.0) * cos_s * cos_s * cos_s) * tp0 * tp0;
  add("CC2_at_1", cc2);
  return rep;
}

ProblemSetup build_problem(const GasModel& model, const GasState& u_minus_bar,
                           const NozzleSpec& nozzle, const InflowPerturbation& inflow,
                           const SetupOptions& opts) {
  model.validate();
  nozzle.validate(opts.force);
  ProblemSetup ps;
  ps.model = model;
  ps.nozzle = nozzle;
  ps.inflow = inflow;
  ps.background = build_background(model, u_minus_bar);
  const GasState b = ps.background.u_minus_bar;
  const double s = nozzle.sigma;
  InletProfile inlet = [b, s, f = ps.inflow](double x) {
    return GasState{b.p + s * f.p0(x), b.theta + s * f.theta0(x), b.q + s * f.q0(x),
                    b.s + s * f.s0(x)};
  };
  ps.inlet = InletMap(model, inlet);
  ps.pe = admissible_pe_interval(model, ps.background, ps.inflow, ps.inlet, nozzle.L);
  return ps;
}

}  // namespace nozzle
