#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "nozzle/kernels.hpp"
#include "nozzle/setup.hpp"
#include "nozzle/shock_solver.hpp"

namespace nozzle {

using Json = nlohmann::ordered_json;

Json critical_points_json(const GasState& u_minus, const PolarCriticalPoints& cp);
Json background_json(const BackgroundShock& bg, const GasModel& model);
Json pe_interval_json(const ProblemSetup& s);
Json compatibility_json(const CompatibilityReport& r);
Json hypotheses_json(const HypothesisReport& h);
// timing_seconds is the only nondeterministic entry and is labeled as such
Json solve_report_json(const ProblemSetup& s, double pe, const SolveReport& r,
                       double timing_seconds);
Json verdict_json(const ProblemSetup& s, double pe, const UniquenessReport& u,
                  double timing_seconds);

void write_json(const std::string& path, const Json& j);
void write_polar_csv(const std::string& path, const std::vector<PolarSample>& samples);
void write_fields_csv(const std::string& path, const ProblemSetup& s, const SolveReport& r);
void write_supersonic_csv(const std::string& path, const SupersonicField& f);
void write_f_tilde_csv(const std::string& path, const FTildeScan& scan);

struct PeSweepRow {
  double pe;
  double linear_root;
  bool ok;
  double delta_xi;
  int iterations;
  std::string error_kind;
};

void write_pe_sweep_csv(const std::string& path, const std::vector<PeSweepRow>& rows);

}  // namespace nozzle
