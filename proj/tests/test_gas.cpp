#include <gtest/gtest.h>

#include <cmath>

#include "nozzle/errors.hpp"
#include "nozzle/gas.hpp"

using namespace nozzle;

TEST(Gas, DensityEntropyRoundTrip) {
  GasModel m;
  m.gamma = 1.3;
  m.c_v = 2.5;
  m.r_const = 0.7;
  for (double p : {0.3, 1.0, 7.0})
    for (double rho : {0.2, 1.0, 3.0}) {
      const double s = m.entropy(p, rho);
      EXPECT_NEAR(m.density(p, s), rho, 1e-13 * rho);
      // p = A(s) rho^gamma with A = R exp(s/c_v)
      EXPECT_NEAR(m.r_const * std::exp(s / m.c_v) * std::pow(rho, m.gamma), p, 1e-12 * p);
    }
}

TEST(Gas, DerivedQuantities) {
  const GasModel m;
  const GasState u = state_from_density(m, 2.0, 1.5, 1.2, 0.3);
  const DerivedState d = derived(m, u);
  EXPECT_NEAR(d.rho, 1.5, 1e-14);
  EXPECT_NEAR(d.c * d.c, 1.4 * 2.0 / 1.5, 1e-13);
  EXPECT_NEAR(d.mach, 1.2 / d.c, 1e-14);
  EXPECT_NEAR(d.enthalpy_i, d.c * d.c / 0.4, 1e-13);
  EXPECT_NEAR(d.bernoulli_B, 0.72 + d.enthalpy_i, 1e-13);
  EXPECT_NEAR(d.u_comp, 1.2 * std::cos(0.3), 1e-15);
  EXPECT_NEAR(d.v_comp, 1.2 * std::sin(0.3), 1e-15);
  EXPECT_NEAR(mach_squared(m, u), d.mach * d.mach, 1e-13);
  // i = gamma p / ((gamma-1) rho)
  EXPECT_NEAR(enthalpy(m, 2.0, u.s), 1.4 * 2.0 / (0.4 * 1.5), 1e-13);
}

TEST(Gas, NonphysicalStatesThrowDomain) {
  const GasModel m;
  try {
    derived(m, GasState{-1.0, 0.0, 1.0, 0.0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Domain);
  }
  EXPECT_THROW(derived(m, GasState{1.0, 0.0, 0.0, 0.0}), Error);
  GasModel bad;
  bad.gamma = 1.0;
  EXPECT_THROW(bad.validate(), Error);
}

TEST(Gas, RegimeClassification) {
  const GasModel m;
  const double c = std::sqrt(1.4);
  auto at = [&](double mach) { return state_from_density(m, 1.0, 1.0, mach * c, 0.0); };
  EXPECT_EQ(flow_regime(m, at(2.0), 0.1), FlowRegime::Supersonic);
  EXPECT_EQ(flow_regime(m, at(0.5), 0.1), FlowRegime::Subsonic);
  EXPECT_EQ(flow_regime(m, at(1.02), 0.1), FlowRegime::Marginal);
  EXPECT_STREQ(regime_name(FlowRegime::Subsonic), "subsonic");
}

TEST(Errors, ExitCodeContract) {
  EXPECT_EQ(exit_code(ErrorKind::Config), 2);
  EXPECT_EQ(exit_code(ErrorKind::Input), 2);
  EXPECT_EQ(exit_code(ErrorKind::Hypothesis), 3);
  EXPECT_EQ(exit_code(ErrorKind::NonConvergence), 4);
  EXPECT_EQ(exit_code(ErrorKind::NoRoot), 5);
  EXPECT_STREQ(kind_name(ErrorKind::Hypothesis), "regime");
}
