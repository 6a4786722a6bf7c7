#include "nozzle/shock_relations.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "nozzle/errors.hpp"
#include "nozzle/roots.hpp"

namespace nozzle {

namespace {

constexpr double kPi = 3.14159265358979323846;

struct Upstream {
  double p, rho, q, theta, m2, gamma;
};

Upstream upstream_of(const GasModel& model, const GasState& u) {
  const DerivedState d = derived(model, u);
  if (!(d.mach > 1.0)) {
    std::ostringstream os;
    os << "no shock: upstream Mach " << d.mach << " is not supersonic";
    fail(ErrorKind::NoShock, os.str());
  }
  return {u.p, d.rho, u.q, u.theta, d.mach * d.mach, model.gamma};
}

// Downstream state for pressure p and deflection delta (relative to theta_-).
GasState downstream_from(const GasModel& model, const Upstream& up, double p,
                         double delta) {
  const double g = up.gamma;
  const double u = up.q - (p - up.p) / (up.rho * up.q);
  const double rho = ((g + 1.0) * p + (g - 1.0) * up.p) /
                     ((g - 1.0) * p + (g + 1.0) * up.p) * up.rho;
  const double q = u / std::cos(delta);
  return state_from_density(model, p, rho, q, up.theta + delta);
}

double radicand(const Upstream& up, double x) {
  const double g = up.gamma;
  const double a = 2.0 * g / (g + 1.0) * (up.m2 - 1.0);
  const double b = (g - 1.0) / (g + 1.0);
  return (a - x) / (x + 1.0 + b);
}

double rhs_x(const Upstream& up, double x) {
  double r = radicand(up, x);
  if (r < 0.0) r = 0.0;
  return x / (up.gamma * up.m2 - x) * std::sqrt(r);
}

// d rhs / dx, x = p/p_- - 1; requires a positive radicand
double rhs_dx(const Upstream& up, double x) {
  const double g = up.gamma;
  const double a = 2.0 * g / (g + 1.0) * (up.m2 - 1.0);
  const double b = (g - 1.0) / (g + 1.0);
  const double n = a - x, d = x + 1.0 + b;
  const double gm = g * up.m2;
  const double f = x / (gm - x), fp = gm / ((gm - x) * (gm - x));
  const double s = std::sqrt(n / d);
  const double sp = 0.5 / s * (-d - n) / (d * d);
  return fp * s + f * sp;
}

double p_max_of(const Upstream& up) {
  const double g = up.gamma;
  return up.p * (2.0 * g * up.m2 - (g - 1.0)) / (g + 1.0);
}

// wave-angle parametrization of the polar
double arc_pressure(const Upstream& up, double beta) {
  const double g = up.gamma, sb = std::sin(beta);
  return up.p * (1.0 + 2.0 * g / (g + 1.0) * (up.m2 * sb * sb - 1.0));
}

double arc_pressure_db(const Upstream& up, double beta) {
  const double g = up.gamma;
  return up.p * 2.0 * g / (g + 1.0) * up.m2 * std::sin(2.0 * beta);
}

double arc_deflection(const Upstream& up, double beta) {
  const double m2 = up.m2, sb = std::sin(beta);
  const double n = 2.0 / std::tan(beta) * (m2 * sb * sb - 1.0);
  const double d = m2 * (up.gamma + std::cos(2.0 * beta)) + 2.0;
  return std::atan(n / d);
}

double arc_deflection_db(const Upstream& up, double beta) {
  const double m2 = up.m2, sb = std::sin(beta), cb = std::cos(beta);
  const double n = 2.0 * cb / sb * (m2 * sb * sb - 1.0);
  const double d = m2 * (up.gamma + std::cos(2.0 * beta)) + 2.0;
  const double np = -2.0 * (m2 * sb * sb - 1.0) / (sb * sb) + 4.0 * m2 * cb * cb;
  const double dp = -2.0 * m2 * std::sin(2.0 * beta);
  const double t = n / d;
  const double tp = (np * d - n * dp) / (d * d);
  return tp / (1.0 + t * t);
}

// wave angle of maximum deflection, in (mu, pi/2)
double beta_star(const Upstream& up) {
  const double mu = std::asin(1.0 / std::sqrt(up.m2));
  auto f = [&](double b) { return arc_deflection_db(up, b); };
  return bisect(f, mu + 1e-12, 0.5 * kPi, 1e-14).x;
}

}  // namespace

const char* branch_name(PolarBranch b) {
  return b == PolarBranch::Upper ? "upper" : "lower";
}

double RhResiduals::max_abs() const {
  return std::max({std::abs(g1), std::abs(g2), std::abs(g3), std::abs(g4)});
}

GasState normal_shock_downstream(const GasModel& model, const GasState& u_minus) {
  const Upstream up = upstream_of(model, u_minus);
  const double g = model.gamma;
  const double m = up.rho * up.q;
  const double momentum = up.p + m * up.q;
  const double B = derived(model, u_minus).bernoulli_B;
  // energy balance along the Rayleigh line, as a function of downstream speed
  auto energy = [&](double q) {
    const double p = momentum - m * q;
    const double rho = m / q;
    return 0.5 * q * q + g / (g - 1.0) * p / rho - B;
  };
  const double c_star = std::sqrt(2.0 * (g - 1.0) / (g + 1.0) * B);
  double q_plus = c_star;
  if (energy(c_star) > 0.0) {
    q_plus = bisect(energy, 1e-12 * up.q, c_star, 1e-15 * up.q).x;
  }
  const double p = momentum - m * q_plus;
  return state_from_density(model, p, m / q_plus, q_plus, u_minus.theta);
}

double polar_rhs(const GasModel& model, const GasState& u_minus, double p) {
  const Upstream up = upstream_of(model, u_minus);
  const double x = p / up.p - 1.0;
  if (radicand(up, x) < -1e-13 || x < -1e-13) {
    std::ostringstream os;
    os << "pressure " << p << " outside polar range [" << up.p << ", "
       << p_max_of(up) << "]";
    fail(ErrorKind::OutOfPolar, os.str());
  }
  return rhs_x(up, x);
}

double polar_rhs_dp(const GasModel& model, const GasState& u_minus, double p) {
  const Upstream up = upstream_of(model, u_minus);
  const double x = p / up.p - 1.0;
  if (!(radicand(up, x) > 0.0)) {
    std::ostringstream os;
    os << "polar slope undefined at p=" << p << " (radicand <= 0)";
    fail(ErrorKind::OutOfPolar, os.str());
  }
  return rhs_dx(up, x) / up.p;
}

PolarPoint polar_state_at_pressure(const GasModel& model, const GasState& u_minus,
                                   double p, PolarBranch branch) {
  const Upstream up = upstream_of(model, u_minus);
  const double pmax = p_max_of(up);
  const double slack = 1e-12 * pmax;
  if (!(p >= up.p - slack && p <= pmax + slack)) {
    std::ostringstream os;
    os << "pressure " << p << " outside polar range [" << up.p << ", " << pmax
       << "]";
    fail(ErrorKind::OutOfPolar, os.str());
  }
  p = std::clamp(p, up.p, pmax);
  const double sign = branch == PolarBranch::Upper ? 1.0 : -1.0;
  const double delta = sign * std::atan(rhs_x(up, p / up.p - 1.0));
  PolarPoint out;
  out.theta = up.theta + delta;
  out.p = p;
  out.branch = branch;
  if (p == up.p) {
    out.downstream = u_minus;
  } else {
    out.downstream = downstream_from(model, up, p, delta);
  }
  return out;
}

PolarCriticalPoints polar_critical_points(const GasModel& model,
                                          const GasState& u_minus) {
  const Upstream up = upstream_of(model, u_minus);
  PolarCriticalPoints cp{};
  cp.p_max = normal_shock_downstream(model, u_minus).p;
  const double g = model.gamma;
  const double a = 2.0 * g / (g + 1.0) * (up.m2 - 1.0);
  auto slope = [&](double x) { return rhs_dx(up, x); };
  const double x_star = bisect(slope, 1e-14 * a, a * (1.0 - 1e-14), 1e-13 * a).x;
  cp.p_star = up.p * (1.0 + x_star);
  cp.theta_star = std::atan(rhs_x(up, x_star));

  auto sonic = [&](double p) {
    const double x = p / up.p - 1.0;
    const double delta = std::atan(rhs_x(up, x));
    return mach_squared(model, downstream_from(model, up, p, delta)) - 1.0;
  };
  const double lo = up.p * (1.0 + 1e-10), hi = cp.p_max * (1.0 - 1e-14);
  cp.p_sonic = bisect(sonic, lo, hi, 1e-14 * cp.p_max).x;
  cp.theta_sonic = std::atan(rhs_x(up, cp.p_sonic / up.p - 1.0));
  return cp;
}

H1Eval h1_residual_and_gradient(const GasModel& model, double theta, double p,
                                const GasState& u_minus, PolarBranch branch) {
  const Upstream up = upstream_of(model, u_minus);
  const double x = p / up.p - 1.0;
  if (!(radicand(up, x) > 0.0)) {
    std::ostringstream os;
    os << "H1 undefined at p=" << p << ": radicand <= 0";
    fail(ErrorKind::OutOfPolar, os.str());
  }
  const double sign = branch == PolarBranch::Upper ? 1.0 : -1.0;
  const double t = std::tan(theta - up.theta);
  H1Eval h{};
  h.value = t - sign * rhs_x(up, x);
  h.d_theta = 1.0 + t * t;
  h.d_p = -sign * rhs_dx(up, x) / up.p;
  h.dp_certified = sign * h.d_p > 0.0;
  return h;
}

std::array<double, 4> h1_upstream_gradient(const GasModel& model, double theta,
                                           double p, const GasState& u_minus,
                                           PolarBranch branch) {
  std::array<double, 4> grad{};
  for (int k = 0; k < 4; ++k) {
    GasState a = u_minus, b = u_minus;
    double* pa = k == 0 ? &a.p : k == 1 ? &a.theta : k == 2 ? &a.q : &a.s;
    double* pb = k == 0 ? &b.p : k == 1 ? &b.theta : k == 2 ? &b.q : &b.s;
    const double h = 1e-6 * std::max(1.0, std::abs(*pa));
    *pa += h;
    *pb -= h;
    grad[k] = (h1_residual_and_gradient(model, theta, p, a, branch).value -
               h1_residual_and_gradient(model, theta, p, b, branch).value) /
              (2.0 * h);
  }
  return grad;
}

RhResiduals rh_residuals(const GasModel& model, const GasState& u_plus,
                         const GasState& u_minus, double psi_slope) {
  const DerivedState a = derived(model, u_plus);
  const DerivedState b = derived(model, u_minus);
  const double jp = u_plus.p - u_minus.p;
  const double jv = a.v_comp - b.v_comp;
  RhResiduals r{};
  r.g1 = (1.0 / (a.rho * a.u_comp) - 1.0 / (b.rho * b.u_comp)) * jp +
         (a.v_comp / a.u_comp - b.v_comp / b.u_comp) * jv;
  r.g2 = (a.u_comp + u_plus.p / (a.rho * a.u_comp) - b.u_comp -
          u_minus.p / (b.rho * b.u_comp)) *
             jp +
         (u_plus.p * a.v_comp / a.u_comp - u_minus.p * b.v_comp / b.u_comp) * jv;
  r.g3 = a.bernoulli_B - b.bernoulli_B;
  r.g4 = jv - psi_slope * jp;
  return r;
}

GasState strong_arc_state(const GasModel& model, const GasState& u_minus,
                          double beta) {
  const Upstream up = upstream_of(model, u_minus);
  return downstream_from(model, up, arc_pressure(up, beta),
                         arc_deflection(up, beta));
}

ArcPoint strong_arc_at_angle(const GasModel& model, const GasState& u_minus,
                             double theta) {
  const Upstream up = upstream_of(model, u_minus);
  const double bs = beta_star(up);
  const double target = theta - up.theta;
  const double dmax = arc_deflection(up, bs);
  if (std::abs(target) >= dmax) {
    std::ostringstream os;
    os << "deflection " << target << " exceeds the maximum " << dmax;
    fail(ErrorKind::OutOfPolar, os.str());
  }
  // deflection decreases monotonically along the strong arc
  double lo = bs, hi = kPi - bs;
  double beta = 0.5 * kPi;
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    beta = 0.5 * (lo + hi);
    if (arc_deflection(up, beta) > target) {
      lo = beta;
    } else {
      hi = beta;
    }
  }
  beta = 0.5 * (lo + hi);
  // two Newton polish steps
  for (int k = 0; k < 2; ++k) {
    const double dd = arc_deflection_db(up, beta);
    if (dd == 0.0) break;
    const double nb = beta - (arc_deflection(up, beta) - target) / dd;
    if (nb > bs && nb < kPi - bs) beta = nb;
  }
  ArcPoint a{};
  a.wave_angle = beta;
  a.p = arc_pressure(up, beta);
  a.dp_dtheta = arc_pressure_db(up, beta) / arc_deflection_db(up, beta);
  a.downstream = downstream_from(model, up, a.p, arc_deflection(up, beta));
  return a;
}

namespace {

Eigen::Vector4d pack(const GasState& u) { return {u.p, u.theta, u.q, u.s}; }
GasState unpack(const Eigen::Vector4d& x) { return {x[0], x[1], x[2], x[3]}; }

bool admissible(const GasModel& model, const GasState& u) {
  if (!(u.p > 0.0) || !(u.q > 0.0) || !std::isfinite(u.s) ||
      !(std::cos(u.theta) > 0.0))
    return false;
  return mach_squared(model, u) < 1.0;
}

Eigen::Vector4d residual_vec(const GasModel& model, const GasState& up,
                             const GasState& um, double slope) {
  const RhResiduals r = rh_residuals(model, up, um, slope);
  return {r.g1, r.g2, r.g3, r.g4};
}

bool newton_h3(const GasModel& model, const GasState& u_minus, double slope,
               double tol, GasState& x) {
  Eigen::Vector4d g = residual_vec(model, x, u_minus, slope);
  for (int it = 0; it < 60; ++it) {
    const double gn = g.cwiseAbs().maxCoeff();
    if (gn <= tol) return true;
    Eigen::Matrix4d jac;
    const Eigen::Vector4d x0 = pack(x);
    for (int k = 0; k < 4; ++k) {
      const double h = 1e-7 * std::max(1.0, std::abs(x0[k]));
      Eigen::Vector4d xp = x0, xm = x0;
      xp[k] += h;
      xm[k] -= h;
      jac.col(k) = (residual_vec(model, unpack(xp), u_minus, slope) -
                    residual_vec(model, unpack(xm), u_minus, slope)) /
                   (2.0 * h);
    }
    const Eigen::Vector4d step = jac.fullPivLu().solve(-g);
    if (!step.allFinite()) return false;
    double alpha = 1.0;
    bool moved = false;
    for (int ls = 0; ls < 40; ++ls, alpha *= 0.5) {
      const GasState trial = unpack(x0 + alpha * step);
      if (!admissible(model, trial)) continue;
      const Eigen::Vector4d gt = residual_vec(model, trial, u_minus, slope);
      if (gt.cwiseAbs().maxCoeff() < gn) {
        x = trial;
        g = gt;
        moved = true;
        break;
      }
    }
    if (!moved) return gn <= 1e3 * tol;
  }
  return g.cwiseAbs().maxCoeff() <= tol;
}

}  // namespace

GasState h3_downstream(const GasModel& model, const GasState& u_minus,
                       double psi_slope, double tol) {
  GasState x = normal_shock_downstream(model, u_minus);
  if (newton_h3(model, u_minus, psi_slope, tol, x)) return x;

  // bracketed fallback along the subsonic part of the strong arc
  const Upstream up = upstream_of(model, u_minus);
  auto m2_minus_one = [&](double b) {
    return mach_squared(model, strong_arc_state(model, u_minus, b)) - 1.0;
  };
  const double mu = std::asin(1.0 / std::sqrt(up.m2));
  const double b_sonic = bisect(m2_minus_one, mu + 1e-12, 0.5 * kPi, 1e-14).x;
  auto g4 = [&](double b) {
    const GasState s = strong_arc_state(model, u_minus, b);
    return rh_residuals(model, s, u_minus, psi_slope).g4;
  };
  const double lo = b_sonic + 1e-10, hi = kPi - b_sonic - 1e-10;
  const double flo = g4(lo), fhi = g4(hi);
  if (std::signbit(flo) == std::signbit(fhi)) {
    std::ostringstream os;
    os << "no subsonic R-H root for shock slope " << psi_slope;
    fail(ErrorKind::NoShock, os.str());
  }
  const double beta = bisect(g4, lo, hi, flo, fhi, 1e-15).x;
  x = strong_arc_state(model, u_minus, beta);
  newton_h3(model, u_minus, psi_slope, tol, x);
  const double res = rh_residuals(model, x, u_minus, psi_slope).max_abs();
  if (!(res <= 1e-10)) {
    std::ostringstream os;
    os << "R-H solve stalled at residual " << res << " for slope " << psi_slope;
    fail(ErrorKind::NoShock, os.str());
  }
  return x;
}

}  // namespace nozzle
