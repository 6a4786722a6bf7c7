#include "nozzle/errors.hpp"

namespace nozzle {

const char* kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::Domain: return "domain";
    case ErrorKind::NoShock: return "no_shock";
    case ErrorKind::OutOfPolar: return "out_of_polar";
    case ErrorKind::Input: return "input";
    case ErrorKind::Config: return "config";
    case ErrorKind::Grid: return "grid";
    case ErrorKind::Solver: return "solver";
    case ErrorKind::Hypothesis: return "regime";
    case ErrorKind::NonConvergence: return "non_convergence";
    case ErrorKind::NoRoot: return "no_root";
    case ErrorKind::Monotonicity: return "monotonicity";
    case ErrorKind::DegenerateShock: return "degenerate_shock";
  }
  return "unknown";
}

int exit_code(ErrorKind k) {
  switch (k) {
    case ErrorKind::Config:
    case ErrorKind::Input:
    case ErrorKind::Grid:
      return 2;
    case ErrorKind::Hypothesis:
    case ErrorKind::NoShock:
    case ErrorKind::Monotonicity:
    case ErrorKind::DegenerateShock:
    case ErrorKind::OutOfPolar:
    case ErrorKind::Domain:
      return 3;
    case ErrorKind::NonConvergence:
      return 4;
    case ErrorKind::NoRoot:
      return 5;
    case ErrorKind::Solver:
      return 1;
  }
  return 1;
}

void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace nozzle
