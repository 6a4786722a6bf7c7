#pragma once

#include <stdexcept>
#include <string>

namespace nozzle {

enum class ErrorKind {
  Domain,          // nonphysical state (p, rho, q <= 0, bad gamma)
  NoShock,         // upstream not supersonic
  OutOfPolar,      // pressure outside [p_minus, p_max]
  Input,           // malformed profile / csv
  Config,          // bad config value, sigma above cap
  Grid,            // CFL or grid size
  Solver,          // linear solve / internal failure
  Hypothesis,      // ellipticity / shock regime breach
  NonConvergence,
  NoRoot,
  Monotonicity,    // more than one sign change of F
  DegenerateShock, // vanishing pressure jump
};

const char* kind_name(ErrorKind k);

// Process exit code for a failure of this kind.
int exit_code(ErrorKind k);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& what);

}  // namespace nozzle
