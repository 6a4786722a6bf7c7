#include "nozzle/gas.hpp"

#include <cmath>
#include <sstream>

#include "nozzle/errors.hpp"

namespace nozzle {

void GasModel::validate() const {
  if (!(gamma > 1.0) || !(c_v > 0.0) || !(r_const > 0.0)) {
    std::ostringstream os;
    os << "invalid gas model: gamma=" << gamma << " c_v=" << c_v
       << " R=" << r_const << " (need gamma>1, c_v>0, R>0)";
    fail(ErrorKind::Domain, os.str());
  }
}

double GasModel::entropy_scale(double s) const {
  return r_const * std::exp(s / c_v);
}

double GasModel::density(double p, double s) const {
  return std::pow(p / entropy_scale(s), 1.0 / gamma);
}

double GasModel::entropy(double p, double rho) const {
  return c_v * std::log(p / (r_const * std::pow(rho, gamma)));
}

static void require_valid(const GasState& u) {
  if (!(u.p > 0.0) || !(u.q > 0.0) || !std::isfinite(u.theta) ||
      !std::isfinite(u.s)) {
    std::ostringstream os;
    os << "nonphysical state p=" << u.p << " q=" << u.q << " theta=" << u.theta
       << " s=" << u.s;
    fail(ErrorKind::Domain, os.str());
  }
}

DerivedState derived(const GasModel& model, const GasState& u) {
  require_valid(u);
  DerivedState d{};
  d.rho = model.density(u.p, u.s);
  d.c = std::sqrt(model.gamma * u.p / d.rho);
  d.mach = u.q / d.c;
  d.enthalpy_i = d.c * d.c / (model.gamma - 1.0);
  d.bernoulli_B = 0.5 * u.q * u.q + d.enthalpy_i;
  d.u_comp = u.q * std::cos(u.theta);
  d.v_comp = u.q * std::sin(u.theta);
  return d;
}

double mach_squared(const GasModel& model, const GasState& u) {
  const double rho = model.density(u.p, u.s);
  return u.q * u.q * rho / (model.gamma * u.p);
}

double enthalpy(const GasModel& model, double p, double s) {
  const double rho = model.density(p, s);
  return model.gamma * p / ((model.gamma - 1.0) * rho);
}

GasState state_from_density(const GasModel& model, double p, double rho,
                            double q, double theta) {
  if (!(rho > 0.0)) fail(ErrorKind::Domain, "non-positive density");
  GasState u{p, theta, q, model.entropy(p, rho)};
  require_valid(u);
  return u;
}

FlowRegime flow_regime(const GasModel& model, const GasState& u, double eps) {
  const double m2 = mach_squared(model, u);
  if (m2 <= 1.0 - eps && m2 < 1.0) return FlowRegime::Subsonic;
  if (m2 >= 1.0 + eps && m2 > 1.0) return FlowRegime::Supersonic;
  return FlowRegime::Marginal;
}

const char* regime_name(FlowRegime r) {
  switch (r) {
    case FlowRegime::Supersonic: return "supersonic";
    case FlowRegime::Subsonic: return "subsonic";
    case FlowRegime::Marginal: return "marginal";
  }
  return "?";
}

}  // namespace nozzle
