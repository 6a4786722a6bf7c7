#include <gtest/gtest.h>

#include <cmath>

#include "nozzle/errors.hpp"
#include "manufactured.hpp"
#include "nozzle/subsonic.hpp"

using namespace nozzle;
using namespace nozzle::mms;

namespace {

const GasModel kGas{};

FixedDomainGrid square(int n) {
  FixedDomainGrid g;
  g.nx = g.ny = n;
  g.xi0 = 0.5;
  g.L = 1.5;
  g.eta0 = 1.0;
  return g;
}

}  // namespace

TEST(Subsonic, ManufacturedSolutionIsSecondOrder) {
  double res = 0.0;
  const double e32 = manufactured_error(32), e64 = manufactured_error(64),
               e128 = manufactured_error(128, Exec::Serial, &res);
  EXPECT_LT(res, 1e-12);
  const double o1 = std::log2(e32 / e64), o2 = std::log2(e64 / e128);
  EXPECT_NEAR(o1, 2.0, 0.2) << e32 << " " << e64;
  EXPECT_NEAR(o2, 2.0, 0.2) << e64 << " " << e128;
}

TEST(Subsonic, ParallelAssemblyGivesSameSolution) {
  ThetaProblem a = manufactured(48), b = manufactured(48);
  b.exec = Exec::Parallel;
  EXPECT_EQ(solve_theta(a).theta, solve_theta(b).theta);
}

TEST(Subsonic, SizeMismatchIsRejected) {
  ThetaProblem pb = manufactured(16);
  pb.top.pop_back();
  EXPECT_THROW(solve_theta(pb), Error);
  pb = manufactured(16);
  pb.grid.nx = 4;
  try {
    solve_theta(pb);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Grid);
  }
}

// theta = e^X cos Y and p = -e^X sin Y are a conjugate pair for unit
// coefficients: p_X = theta_Y, p_Y = -theta_X.
TEST(Subsonic, PressureRecoveryMatchesConjugatePair) {
  auto err = [](int n) {
    const FixedDomainGrid g = square(n);
    std::vector<double> t(g.size()), one(g.size(), 1.0), zero(g.size(), 0.0);
    for (int j = 0; j <= n; ++j)
      for (int i = 0; i <= n; ++i) t[g.idx(i, j)] = std::exp(g.X(i)) * std::cos(g.Y(j));
    const std::vector<double> p = recover_p(g, t, one, zero, one, 0.0);
    double e = 0.0;
    for (int j = 0; j <= n; ++j)
      for (int i = 0; i <= n; ++i) {
        const double exact = -std::exp(g.X(i)) * std::sin(g.Y(j)) + std::exp(g.L) * std::sin(g.Y(j));
        e = std::max(e, std::abs(p[g.idx(i, j)] - exact));
      }
    return std::pair{e, loop_mismatch(g, t, one, zero, one)};
  };
  const auto [e32, m32] = err(32);
  const auto [e64, m64] = err(64);
  EXPECT_LT(e64, 5e-4);
  EXPECT_NEAR(std::log2(e32 / e64), 2.0, 0.2);
  // circulation per unit area of second-order face fluxes: first order
  EXPECT_GT(std::log2(m32 / m64), 0.8) << m32 << " " << m64;
}

TEST(Subsonic, CoefficientsMatchClosedForm) {
  const GasState u{1.7, 0.05, 0.6, 0.1};
  const double rho = kGas.density(u.p, u.s);
  const double m2 = u.q * u.q * rho / (kGas.gamma * u.p);
  const double ct = std::cos(u.theta), st = std::sin(u.theta);
  const ThetaCoefficients c = theta_coefficients(kGas, u);
  const double den = (1 - m2) * ct;
  EXPECT_NEAR(c.a11, u.q * (1 - m2 * ct * ct) / den, 1e-13);
  EXPECT_NEAR(c.a12, -rho * u.q * u.q * st / den, 1e-13);
  EXPECT_NEAR(c.a22, rho * rho * u.q * u.q * u.q / den, 1e-13);
  EXPECT_GT(c.lambda_lower, 0.0);
  EXPECT_NEAR(c.a11 * c.a22 - c.a12 * c.a12, c.lambda_lower * (c.a11 + c.a22 - c.lambda_lower),
              1e-10);
  const GasState supersonic{1.0, 0.0, 2.0 * std::sqrt(1.4), 0.0};
  try {
    theta_coefficients(kGas, supersonic);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Hypothesis);
  }
}

TEST(Subsonic, NormalizedShockRowIsParallelToLiteralRow) {
  const GasState um{1.0, 0.004, 2.0 * std::sqrt(1.4), 0.0};
  for (double theta : {0.01, 0.03, -0.02}) {
    for (double ps : {0.0, 0.02, -0.05}) {
      const ArcPoint arc = strong_arc_at_angle(kGas, um, theta);
      const NormalizedShockRow nr = normalized_shock_row(kGas, arc.downstream, um, ps);
      const ShockCoeffs lit = shock_oblique_coeffs(kGas, arc.downstream, um, ps, {0, 0, 0, 0});
      const double scale = std::hypot(lit.l1, lit.l2) * std::hypot(nr.l_xi, nr.l_eta);
      EXPECT_LT(std::abs(lit.l1 * nr.l_eta - lit.l2 * nr.l_xi), 1e-7 * scale)
          << theta << " " << ps;
      // the normalized row is the literal one times a negative multiple of 1/d_p
      EXPECT_LT((lit.l1 * nr.l_xi + lit.l2 * nr.l_eta) / lit.d_p, 0.0);
      EXPECT_NEAR(lit.f_s, 0.0, 1e-14);
    }
  }
}

TEST(Subsonic, QsRecoveryConservesEntropyAndBernoulli) {
  const FixedDomainGrid g = square(24);
  std::vector<GasState> shock(g.ny + 1);
  std::vector<double> p(g.size());
  for (int j = 0; j <= g.ny; ++j) shock[j] = {4.5 + 0.01 * std::sin(j), 0.0, 0.55 + 0.001 * j, 0.3 + 0.01 * j};
  for (int j = 0; j <= g.ny; ++j)
    for (int i = 0; i <= g.nx; ++i) p[g.idx(i, j)] = 4.5 + 0.02 * std::cos(g.X(i) + g.Y(j));
  const QsFields qs = recover_q_s(kGas, g, p, shock);
  FieldSet f = FieldSet::uniform(g, shock[0]);
  f.p = p;
  f.q = qs.q;
  f.s = qs.s;
  const ConservationAudit a = audit_conservation(kGas, f);
  EXPECT_EQ(a.max_ds_dxi, 0.0);
  EXPECT_LT(a.max_dB_dxi, 1e-10);
  p[g.idx(3, 3)] = -1.0;
  EXPECT_THROW(recover_q_s(kGas, g, p, shock), Error);
}

TEST(Subsonic, HypothesisCheckLocatesWorstNode) {
  const FixedDomainGrid g = square(16);
  const BackgroundShock bg = build_background(kGas, upstream_state(kGas, 1, 1, 2));
  FieldSet f = FieldSet::uniform(g, bg.u_plus_bar);
  std::vector<GasState> trace(g.ny + 1, bg.u_plus_bar);
  EXPECT_TRUE(check_hypotheses(kGas, f, trace, bg, 0.1).pass());
  // M^2 = 1.05 at one node
  const double rho = kGas.density(f.p[0], f.s[0]);
  f.q[g.idx(5, 7)] = std::sqrt(1.05 * kGas.gamma * f.p[0] / rho);
  const HypothesisReport r = check_hypotheses(kGas, f, trace, bg, 0.1);
  EXPECT_FALSE(r.mach_ok);
  EXPECT_EQ(r.worst_mach.i, 5);
  EXPECT_EQ(r.worst_mach.j, 7);
  EXPECT_NE(r.describe().find("i=5, j=7"), std::string::npos);
  EXPECT_THROW(require_hypotheses(r), Error);
}
