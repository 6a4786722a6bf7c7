#pragma once

namespace nozzle {

struct GasModel {
  double gamma = 1.4;
  double c_v = 1.0;
  double r_const = 1.0;

  void validate() const;
  // A(s) = R exp(s / c_v), recomputed on every call.
  double entropy_scale(double s) const;
  double density(double p, double s) const;
  double entropy(double p, double rho) const;
};

// Primitive state U = (p, theta, q, s).
struct GasState {
  double p = 1.0;
  double theta = 0.0;
  double q = 1.0;
  double s = 0.0;
};

struct DerivedState {
  double rho;
  double c;
  double mach;
  double enthalpy_i;
  double bernoulli_B;
  double u_comp;
  double v_comp;
};

DerivedState derived(const GasModel& model, const GasState& u);

double mach_squared(const GasModel& model, const GasState& u);

// Specific enthalpy i(p, s).
double enthalpy(const GasModel& model, double p, double s);

GasState state_from_density(const GasModel& model, double p, double rho,
                            double q, double theta);

enum class FlowRegime { Supersonic, Subsonic, Marginal };

FlowRegime flow_regime(const GasModel& model, const GasState& u, double eps);

const char* regime_name(FlowRegime r);

}  // namespace nozzle
