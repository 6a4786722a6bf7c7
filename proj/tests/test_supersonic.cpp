#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "nozzle/errors.hpp"
#include "nozzle/supersonic.hpp"

using namespace nozzle;

namespace {

const GasModel kGas{};

BackgroundShock m2() { return build_background(kGas, upstream_state(kGas, 1, 1, 2)); }

InletTrace zero_trace(int ny) {
  InletTrace t;
  t.p0.assign(ny + 1, 0.0);
  t.theta0 = t.q0 = t.s0 = t.p0;
  return t;
}

MarchGrid grid_for(const BackgroundShock& bg, int ny, double xi_end = 1.0) {
  MarchGrid g;
  g.ny = ny;
  g.eta0 = 2.0 * std::sqrt(1.4);
  g.xi_end = xi_end;
  g.nxi = required_march_steps(bg, g);
  return g;
}

double sup_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

// standing-wave solution of p_xi = -a theta_eta, theta_xi = -b p_eta with
// flat walls: theta = A sin(k eta) cos(w xi), p = -(a/lambda) A cos(k eta) sin(w xi)
struct StandingWave {
  double a, b, lam, k, amp;
  double theta(double xi, double eta) const {
    return amp * std::sin(k * eta) * std::cos(lam * k * xi);
  }
  double p(double xi, double eta) const {
    return -(a / lam) * amp * std::cos(k * eta) * std::sin(lam * k * xi);
  }
};

double standing_wave_error(int ny) {
  const BackgroundShock bg = m2();
  const MarchGrid g = grid_for(bg, ny, 0.5);
  const double q = bg.u_minus_bar.q, rho = bg.rho_minus;
  StandingWave w;
  w.a = rho * rho * q * q * q / (bg.mach2_minus - 1.0);
  w.b = 1.0 / q;
  w.lam = std::sqrt(w.a * w.b);
  w.k = std::numbers::pi / g.eta0;
  w.amp = 0.01;
  InletTrace in = zero_trace(ny);
  for (int j = 0; j <= ny; ++j) in.theta0[j] = w.theta(0.0, j * g.deta()) / 0.01;
  SupersonicOptions o;
  o.corrections = false;
  o.upper_wall_angle = 0.0;
  const SupersonicField f = solve_linearized(kGas, bg, in, 0.01, g, o);
  double err = 0.0;
  for (int i = 0; i <= g.nxi; ++i)
    for (int j = 0; j <= ny; ++j) {
      const double xi = i * g.dxi(), eta = j * g.deta();
      err = std::max(err, std::abs(f.dtheta[f.idx(i, j)] - w.theta(xi, eta)));
      err = std::max(err, std::abs(f.dp[f.idx(i, j)] - w.p(xi, eta)));
    }
  return err;
}

}  // namespace

TEST(Supersonic, UniformDataStaysUniform) {
  const BackgroundShock bg = m2();
  const MarchGrid g = grid_for(bg, 32);
  SupersonicOptions o;
  o.upper_wall_angle = 0.0;
  const SupersonicField f = solve_linearized(kGas, bg, zero_trace(32), 0.01, g, o);
  EXPECT_EQ(sup_abs(f.dp), 0.0);
  EXPECT_EQ(sup_abs(f.dtheta), 0.0);
  EXPECT_EQ(sup_abs(f.dq), 0.0);
  EXPECT_EQ(sup_abs(f.ds), 0.0);
  const GasState u = f.trace(0.377, 5);
  EXPECT_EQ(u.p, bg.u_minus_bar.p);
  EXPECT_EQ(u.q, bg.u_minus_bar.q);
}

TEST(Supersonic, StandingWaveConvergesAtSecondOrder) {
  const double e1 = standing_wave_error(32), e2 = standing_wave_error(64);
  const double order = std::log2(e1 / e2);
  EXPECT_LT(e2, 1e-5);
  EXPECT_GT(order, 1.8) << e1 << " " << e2;
}

TEST(Supersonic, FirstPassIsLinearInSigma) {
  const BackgroundShock bg = m2();
  const MarchGrid g = grid_for(bg, 32);
  InletTrace in = zero_trace(32);
  for (int j = 0; j <= 32; ++j) {
    const double x = j / 32.0;
    in.p0[j] = std::cos(3 * x);
    in.q0[j] = 0.2 * x;
    in.s0[j] = x * x;
    in.theta0[j] = x * x * (3 - 2 * x);
  }
  SupersonicOptions o;
  o.corrections = false;
  const SupersonicField a = solve_linearized(kGas, bg, in, 0.01, g, o);
  const SupersonicField b = solve_linearized(kGas, bg, in, 0.02, g, o);
  for (size_t n = 0; n < a.dp.size(); ++n) {
    EXPECT_NEAR(b.dp[n], 2 * a.dp[n], 1e-14);
    EXPECT_NEAR(b.dtheta[n], 2 * a.dtheta[n], 1e-14);
    EXPECT_NEAR(b.dq[n], 2 * a.dq[n], 1e-14);
    EXPECT_NEAR(b.ds[n], 2 * a.ds[n], 1e-14);
  }
  // linearized Bernoulli combination is carried unchanged along each line
  const double rq = bg.rho_minus * bg.u_minus_bar.q;
  for (int i = 0; i <= g.nxi; i += 7)
    for (int j = 0; j <= 32; ++j)
      EXPECT_NEAR(rq * a.dq[a.idx(i, j)] + a.dp[a.idx(i, j)],
                  0.01 * (rq * in.q0[j] + in.p0[j]), 1e-15);
}

TEST(Supersonic, CorrectionsAreSecondOrderInSigma) {
  const BackgroundShock bg = m2();
  const MarchGrid g = grid_for(bg, 32);
  InletTrace in = zero_trace(32);
  for (int j = 0; j <= 32; ++j) {
    const double x = j / 32.0;
    in.p0[j] = std::cos(3 * x);
    in.theta0[j] = x * x * (3 - 2 * x);
  }
  auto first_change = [&](double sigma) {
    const SupersonicField f = solve_linearized(kGas, bg, in, sigma, g);
    EXPECT_LE(f.pass_changes.back(), 1e-10);
    // difference between pass 2 and the linear pass
    return f.pass_changes.front();
  };
  const double c1 = first_change(0.02), c2 = first_change(0.01);
  EXPECT_NEAR(c1 / c2, 4.0, 0.2);
}

// In the mass-flux coordinates each eta-line is a streamline, so the
// nonlinear Bernoulli constant is exactly conserved along it. The corrected
// march must do much better than the linear pass.
TEST(Supersonic, CorrectionsRestoreBernoulliAlongStreamlines) {
  const BackgroundShock bg = m2();
  const MarchGrid g = grid_for(bg, 32);
  InletTrace in = zero_trace(32);
  for (int j = 0; j <= 32; ++j) {
    const double x = j / 32.0;
    in.p0[j] = std::cos(3 * x);
    in.q0[j] = 0.5 * x;
    in.theta0[j] = x * x * (3 - 2 * x);
  }
  auto bernoulli = [&](const GasState& u) {
    const double rho = kGas.density(u.p, u.s);
    return 0.5 * u.q * u.q + kGas.gamma / (kGas.gamma - 1.0) * u.p / rho;
  };
  auto drift = [&](bool corr) {
    SupersonicOptions o;
    o.corrections = corr;
    const SupersonicField f = solve_linearized(kGas, bg, in, 0.02, g, o);
    double m = 0.0;
    for (int i = 0; i <= g.nxi; ++i)
      for (int j = 0; j <= 32; ++j)
        m = std::max(m, std::abs(bernoulli(f.state(i, j)) - bernoulli(f.state(0, j))));
    return m;
  };
  const double lin = drift(false), corr = drift(true);
  EXPECT_GT(lin, 1e-5);
  EXPECT_LT(corr, 0.05 * lin) << lin << " " << corr;
}

TEST(Supersonic, CflViolationIsAGridError) {
  const BackgroundShock bg = m2();
  MarchGrid g = grid_for(bg, 32);
  g.nxi = g.nxi / 3;
  try {
    solve_linearized(kGas, bg, zero_trace(32), 0.01, g);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Grid);
  }
  g.nxi = 100;
  EXPECT_THROW(solve_linearized(kGas, bg, zero_trace(16), 0.01, g), Error);
}

// The pressure integral across the channel obeys a discrete balance with
// the wall angle, inlet pressure and forcing; the march conserves it to roundoff.
TEST(Supersonic, MassBalanceAtTheShockFace) {
  const BackgroundShock bg = m2();
  for (int ny : {32, 64}) {
    const MarchGrid g = grid_for(bg, ny);
    InletTrace in = zero_trace(ny);
    for (int j = 0; j <= ny; ++j) {
      const double x = static_cast<double>(j) / ny;
      in.p0[j] = 0.3 * std::cos(3 * x);
      in.theta0[j] = (15 * x - 10 * x * x * x + 3 * std::pow(x, 5)) / 8;
    }
    const SupersonicField f = solve_linearized(kGas, bg, in, 0.02, g);
    ASSERT_GT(f.passes, 2);
    for (double xs : {0.0, 0.25, 0.5, 0.613, 0.9, 1.0})
      EXPECT_LT(std::abs(trace_and_integrals(f, xs).pl0_residual), 1e-14) << ny << " " << xs;
  }
}
