#pragma once

#include <array>
#include <string>
#include <vector>

#include "nozzle/kernels.hpp"
#include "nozzle/setup.hpp"

namespace nozzle {

// Uniform grid on the fixed rectangle (xi0, L) x (0, eta0). Node (i, j) has
// index j*(nx+1)+i.
struct FixedDomainGrid {
  int nx = 128;
  int ny = 64;
  double xi0 = 0.5;
  double L = 1.0;
  double eta0 = 1.0;

  void validate() const;
  double hx() const { return (L - xi0) / nx; }
  double hy() const { return eta0 / ny; }
  double X(int i) const { return xi0 + i * hx(); }
  double Y(int j) const { return j * hy(); }
  int idx(int i, int j) const { return j * (nx + 1) + i; }
  int size() const { return (nx + 1) * (ny + 1); }
  // within one cell of one of the four corners
  bool in_corner_collar(int i, int j) const;
};

struct FieldSet {
  FixedDomainGrid grid;
  std::vector<double> p, theta, q, s;

  static FieldSet uniform(const FixedDomainGrid& g, const GasState& u);
  GasState at(int i, int j) const;
};

struct ThetaCoefficients {
  double a11, a12, a22, lambda_lower;
};

ThetaCoefficients theta_coefficients(const GasModel& model, const GasState& u);

struct ExitCoeffs {
  double A_e, B_e;
};

ExitCoeffs exit_oblique_coeffs(const GasModel& model, const GasState& u);

struct ShockCoeffs {
  double A_s, B_s, f_s;
  double l1, l2;      // components of the oblique vector (before 1/sqrt(1+psi'^2))
  double d_theta, d_p;
  bool as_positive;
};

// du_minus_deta: derivative of the upstream trace U_-(psi(eta), eta) along the
// shock, ordered (p, theta, q, s). Requires p > p_star(U_-) + eps_p.
ShockCoeffs shock_oblique_coeffs(const GasModel& model, const GasState& u_plus,
                                 const GasState& u_minus, double psi_slope,
                                 const std::array<double, 4>& du_minus_deta,
                                 double eps_p = 0.0);

// Oblique shock condition divided by -sqrt(1+psi'^2)/d_p H1, which stays
// finite at the normal-shock point:
//   lxi d_xi theta + leta d_eta theta = g
struct NormalizedShockRow {
  double l_xi, l_eta;
  double p_theta;  // slope of the strong-arc pressure in theta
};

NormalizedShockRow normalized_shock_row(const GasModel& model, const GasState& u_plus,
                                        const GasState& u_minus, double psi_slope);

// cx d_X theta + cy d_Y theta = rhs on a vertical boundary.
struct ObliqueRow {
  double cx = 0.0, cy = 0.0, rhs = 0.0;
};

struct ThetaProblem {
  FixedDomainGrid grid;
  std::vector<double> c11, c12, c22;  // nodal, straightened coordinates
  std::vector<double> source;         // empty means zero
  std::vector<double> bottom, top;    // Dirichlet values per i
  std::vector<ObliqueRow> shock_rows, exit_rows;  // per j
  double tol = 1e-10;
  Exec exec = Exec::Serial;
};

struct ThetaSolution {
  std::vector<double> theta;
  double residual;  // ||A x - b||_inf / (||A||_inf ||x||_inf + ||b||_inf)
};

ThetaSolution solve_theta(const ThetaProblem& prob);

// Face-integrated pressure from the exit inward along xi-lines.
std::vector<double> recover_p(const FixedDomainGrid& g, const std::vector<double>& theta,
                              const std::vector<double>& c11,
                              const std::vector<double>& c12,
                              const std::vector<double>& c22, double exit_value);

// Max cell circulation of the discrete pressure gradient divided by the cell
// area, corner collar excluded.
double loop_mismatch(const FixedDomainGrid& g, const std::vector<double>& theta,
                     const std::vector<double>& c11, const std::vector<double>& c12,
                     const std::vector<double>& c22);

struct QsFields {
  std::vector<double> q, s;
};

// s and the Bernoulli constant carried along each xi-line from the shock
// states, q from Bernoulli.
QsFields recover_q_s(const GasModel& model, const FixedDomainGrid& g,
                     const std::vector<double>& p,
                     const std::vector<GasState>& shock_states);

struct ConservationAudit {
  double max_ds_dxi;
  double max_dB_dxi;
};

ConservationAudit audit_conservation(const GasModel& model, const FieldSet& f);

struct NodeLocation {
  int i = -1, j = -1;
  double xi = 0.0, eta = 0.0;
};

struct HypothesisReport {
  double eps = 0.1;
  bool mach_ok = true, u_ok = true, pressure_ok = true;
  double max_mach2 = 0.0, min_u = 0.0, min_pressure_margin = 0.0;
  double p_star_bar = 0.0;
  NodeLocation worst_mach, worst_u, worst_pressure;
  bool pass() const { return mach_ok && u_ok && pressure_ok; }
  std::string describe() const;
};

HypothesisReport check_hypotheses(const GasModel& model, const FieldSet& f,
                                  const std::vector<GasState>& shock_trace,
                                  const BackgroundShock& bg, double eps,
                                  const std::vector<double>* shock_xi = nullptr);

// Throws the regime error carrying the located diagnostic when any check fails.
void require_hypotheses(const HypothesisReport& rep);

}  // namespace nozzle
