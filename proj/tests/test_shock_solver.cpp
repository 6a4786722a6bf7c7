#include <gtest/gtest.h>

#include <cmath>

#include "nozzle/errors.hpp"
#include "nozzle/shock_solver.hpp"

using namespace nozzle;

namespace {

const GasModel kGas{};

Profile quintic() {
  std::vector<double> v(1001);
  for (int k = 0; k <= 1000; ++k) {
    const double x = k / 1000.0;
    v[k] = (15 * x - 10 * x * x * x + 3 * std::pow(x, 5)) / 8;
  }
  return Profile(v);
}

ProblemSetup baseline(double sigma = 0.01, Profile p0 = Profile::zero()) {
  NozzleSpec nz;
  nz.sigma = sigma;
  InflowPerturbation in{p0, quintic(), Profile::zero(), Profile::zero()};
  return build_problem(kGas, upstream_state(kGas, 1, 1, 2), nz, in);
}

FixedDomainGrid grid(int nx = 64, int ny = 32) {
  FixedDomainGrid g;
  g.nx = nx;
  g.ny = ny;
  return g;
}

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorKind::Solver;
}

}  // namespace

TEST(Front, TrapezoidIntegratesDownFromTheTop) {
  std::vector<double> slope(11);
  for (int j = 0; j <= 10; ++j) slope[j] = 0.1 * j / 10.0;  // psi' = 0.1 eta
  const ShockFront f = make_front(0.5, 0.02, slope, 1.0);
  EXPECT_DOUBLE_EQ(f.xi_star, 0.52);
  EXPECT_DOUBLE_EQ(f.position[10], 0.52);
  for (int j = 0; j <= 10; ++j) {
    const double eta = j / 10.0;
    EXPECT_NEAR(f.position[j], 0.52 - 0.05 * (1.0 - eta * eta), 1e-15);
  }
}

TEST(Solvability, LinearRootMatchesClosedForm) {
  const ProblemSetup s = baseline(0.01, Profile::parse("affine:0.2,0.3"));
  const double kappa = s.background.kappa;
  ASSERT_NE(s.pe.g_script, 0.0);
  for (double t : {0.1, 0.5, 0.83}) {
    const double pe = s.pe.lo + t * (s.pe.hi - s.pe.lo);
    const double expect = (1.0 + s.pe.g_script - s.pe.prefactor * pe) / kappa - 0.5;
    EXPECT_NEAR(f_tilde_linear_root(s, pe), expect, 1e-12);
    SolvabilityContext ctx;
    ctx.setup = &s;
    ctx.pe = pe;
    const LocateResult r = locate_shock(ctx);
    EXPECT_NEAR(r.delta_xi, expect, 1e-10);
    EXPECT_EQ(r.sign_changes, 1);
    EXPECT_NEAR(f_tilde_linear(s, pe, expect), 0.0, 1e-12);
    // slope of the linear form is exactly -kappa
    EXPECT_NEAR(f_tilde_linear(s, pe, expect + 0.1) - f_tilde_linear(s, pe, expect), -0.1 * kappa,
                1e-12);
  }
}

TEST(Solvability, PeOutsideIntervalHasNoRoot) {
  const ProblemSetup s = baseline();
  const double w = s.pe.hi - s.pe.lo;
  for (double pe : {s.pe.lo - 0.1 * w, s.pe.hi + 0.1 * w}) {
    SolvabilityContext ctx;
    ctx.setup = &s;
    ctx.pe = pe;
    EXPECT_EQ(kind_of([&] { locate_shock(ctx); }), ErrorKind::NoRoot);
    EXPECT_EQ(kind_of([&] { fixed_point_solve(s, pe, grid()); }), ErrorKind::NoRoot);
  }
}

TEST(Solvability, DegenerateJumpIsRejected) {
  const BackgroundShock bg = build_background(kGas, upstream_state(kGas, 1, 1, 2));
  std::vector<GasState> up(4, bg.u_plus_bar), dn(4, bg.u_minus_bar);
  EXPECT_EQ(update_front_slope(kGas, up, dn, 1.0), std::vector<double>(4, 0.0));
  up[2] = bg.u_minus_bar;
  EXPECT_EQ(kind_of([&] { update_front_slope(kGas, up, dn, 1.0); }), ErrorKind::DegenerateShock);
}

class SolvedBaseline : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    setup_ = new ProblemSetup(baseline());
    report_ = new SolveReport(fixed_point_solve(*setup_, setup_->pe.mid(), grid()));
  }
  static void TearDownTestSuite() {
    delete report_;
    delete setup_;
  }
  static ProblemSetup* setup_;
  static SolveReport* report_;
};
ProblemSetup* SolvedBaseline::setup_ = nullptr;
SolveReport* SolvedBaseline::report_ = nullptr;

TEST_F(SolvedBaseline, ConvergesWithContraction) {
  const SolveReport& r = *report_;
  ASSERT_TRUE(r.converged);
  EXPECT_LT(r.iterations_run, 15);
  EXPECT_LT(r.diag.tail_ratio, 0.5);
  EXPECT_LE(r.iterations.back().change, 1e-10);
  EXPECT_TRUE(r.hypotheses.pass());
  // the shock stays near the linear estimate and inside the nozzle
  EXPECT_LT(std::abs(r.front.delta_xi - r.diag.linear_root), 0.05);
  for (double x : r.front.position) {
    EXPECT_GT(x, 0.0);
    EXPECT_LT(x, 1.0);
  }
}

TEST_F(SolvedBaseline, ConservationAndJumpConditions) {
  const SolveReport& r = *report_;
  EXPECT_LE(r.diag.max_ds_dxi, 1e-10);
  EXPECT_LE(r.diag.max_dB_dxi, 1e-10);
  EXPECT_LE(r.diag.rh_residual_max, 1e-9);
  EXPECT_LE(std::abs(r.diag.shock_pressure_mismatch), 1e-10);
  EXPECT_LE(std::abs(r.diag.pl0_residual), 1e-14);
  // check the jump conditions on the returned traces directly
  for (size_t j = 0; j < r.shock_trace.size(); ++j) {
    const RhResiduals res =
        rh_residuals(kGas, r.shock_trace[j], r.upstream_trace[j], r.front.slope[j]);
    EXPECT_LE(res.max_abs(), 1e-9) << j;
  }
}

TEST_F(SolvedBaseline, SolvabilityProfileIsMonotone) {
  const SolveReport& r = *report_;
  const FTildeScan& sc = r.f_tilde_profile;
  ASSERT_GE(sc.value.size(), 64u);
  EXPECT_EQ(sc.sign_changes, 1);
  EXPECT_EQ(sc.ascending_pairs, 0);
  const double kappa = setup_->background.kappa;
  const size_t n = sc.value.size();
  for (int m = 0; m < 16; ++m) {
    const size_t k = 1 + m * (n - 3) / 15;
    const double slope = (sc.value[k + 1] - sc.value[k - 1]) / (sc.delta_xi[k + 1] - sc.delta_xi[k - 1]);
    EXPECT_NEAR(slope, -kappa, 0.1 * kappa) << sc.delta_xi[k];
  }
  EXPECT_NEAR(r.diag.f_tilde_slope, -kappa, 0.1 * kappa);
}

TEST_F(SolvedBaseline, HypothesisGateCatchesInjectedBreaches) {
  const SolveReport& r = *report_;
  const BackgroundShock& bg = setup_->background;
  FieldSet f = r.fields;
  const int n = f.grid.idx(10, 12);
  const double rho = kGas.density(f.p[n], f.s[n]);
  f.q[n] = std::sqrt(1.05 * kGas.gamma * f.p[n] / rho);
  const HypothesisReport h = check_hypotheses(kGas, f, r.shock_trace, bg, 0.1);
  EXPECT_FALSE(h.mach_ok);
  EXPECT_EQ(h.worst_mach.i, 10);
  EXPECT_EQ(h.worst_mach.j, 12);
  EXPECT_EQ(kind_of([&] { require_hypotheses(h); }), ErrorKind::Hypothesis);

  std::vector<GasState> trace = r.shock_trace;
  trace[5].p = bg.polar.p_star + 0.05;
  const HypothesisReport hp = check_hypotheses(kGas, r.fields, trace, bg, 0.1);
  EXPECT_FALSE(hp.pressure_ok);
  EXPECT_EQ(hp.worst_pressure.j, 5);
  EXPECT_NE(hp.describe().find("j=5"), std::string::npos);
}

TEST_F(SolvedBaseline, ParallelSolveIsBitIdentical) {
  SolverOptions o;
  o.exec = Exec::Parallel;
  const SolveReport p = fixed_point_solve(*setup_, setup_->pe.mid(), grid(), {}, o);
  EXPECT_EQ(p.front.delta_xi, report_->front.delta_xi);
  EXPECT_EQ(p.fields.theta, report_->fields.theta);
  EXPECT_EQ(p.fields.p, report_->fields.p);
  EXPECT_EQ(p.front.slope, report_->front.slope);
  EXPECT_EQ(p.iterations_run, report_->iterations_run);
}

TEST(Solver, ShockNearTheIntervalEnds) {
  const ProblemSetup s = baseline();
  const double w = s.pe.hi - s.pe.lo;
  for (double pe : {s.pe.lo + 0.05 * w, s.pe.hi - 0.05 * w}) {
    const SolveReport r = fixed_point_solve(s, pe, grid());
    EXPECT_TRUE(r.converged);
    EXPECT_GT(r.front.delta_xi, -0.5);
    EXPECT_LT(r.front.delta_xi, 0.5);
    EXPECT_LE(r.diag.rh_residual_max, 1e-9);
  }
}

TEST(Solver, ResponseScalesLinearlyWithSigma) {
  const SolveReport a = fixed_point_solve(baseline(0.01), baseline(0.01).pe.mid(), grid());
  const SolveReport b = fixed_point_solve(baseline(0.005), baseline(0.005).pe.mid(), grid());
  EXPECT_NEAR(a.diag.sup_theta / b.diag.sup_theta, 2.0, 0.05);
  EXPECT_NEAR(a.diag.sup_dp / b.diag.sup_dp, 2.0, 0.05);
  EXPECT_NEAR(a.diag.sup_slope / b.diag.sup_slope, 2.0, 0.1);
  // contraction improves in proportion to sigma
  EXPECT_LT(a.diag.tail_ratio, 0.1);
  EXPECT_LT(b.diag.tail_ratio, a.diag.tail_ratio);
}

TEST(Solver, TightRegimeMarginAborts) {
  const ProblemSetup s = baseline();
  SolverOptions o;
  o.eps_hyp = 0.7;  // 1 - eps is below the background M+^2 = 1/3
  EXPECT_EQ(kind_of([&] { fixed_point_solve(s, s.pe.mid(), grid(), {}, o); }),
            ErrorKind::Hypothesis);
}

TEST(Solver, IterationCapRaisesNonConvergence) {
  const ProblemSetup s = baseline();
  SolverOptions o;
  o.max_iters = 2;
  try {
    fixed_point_solve(s, s.pe.mid(), grid(), {}, o);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NonConvergence);
    EXPECT_EQ(exit_code(e.kind()), 4);
  }
}

TEST(Solver, PlanarLimit) {
  const ProblemSetup s = baseline(0.0);
  const SolveReport r = fixed_point_solve(s, 0.0, grid());
  EXPECT_TRUE(r.converged);
  EXPECT_EQ(r.front.delta_xi, 0.0);
  for (double v : r.front.slope) EXPECT_EQ(v, 0.0);
  EXPECT_NEAR(r.fields.p[7], 4.5, 1e-12);
  EXPECT_LE(r.diag.rh_residual_max, 1e-12);
  EXPECT_EQ(kind_of([&] { fixed_point_solve(s, 0.1, grid()); }), ErrorKind::NoRoot);
}

TEST(Uniqueness, SeedsAgree) {
  const ProblemSetup s = baseline();
  const UniquenessReport u = uniqueness_sweep(s, s.pe.mid(), grid());
  EXPECT_EQ(u.verdict, Verdict::Unique) << u.note;
  ASSERT_EQ(u.seeds.size(), 5u);
  for (const SeedResult& r : u.seeds) {
    EXPECT_TRUE(r.ok) << r.error;
    EXPECT_LT(r.tail_ratio, 0.5);
  }
  EXPECT_LE(u.delta_xi_spread, 1e-6);
  EXPECT_EQ(u.scan_sign_changes, 1);
}

TEST(Uniqueness, FrozenPositionsDisagree) {
  const ProblemSetup s = baseline();
  SweepOptions sw;
  sw.n_seeds = 3;
  sw.frozen_delta_xi = {-0.2, 0.0, 0.2};
  const UniquenessReport u = uniqueness_sweep(s, s.pe.mid(), grid(), sw);
  EXPECT_EQ(u.verdict, Verdict::SeedDisagreement) << u.note;
  EXPECT_NEAR(u.delta_xi_spread, 0.4, 1e-12);
}
