#pragma once

#include <functional>

namespace nozzle {

struct RootResult {
  double x;
  double fx;
  int iterations;
};

// Bracketed bisection; f(lo) and f(hi) must differ in sign (a zero endpoint
// is returned directly).
RootResult bisect(const std::function<double(double)>& f, double lo, double hi,
                  double xtol, int max_iter = 200);

// Same, with the endpoint values already known.
RootResult bisect(const std::function<double(double)>& f, double lo, double hi,
                  double flo, double fhi, double xtol, int max_iter = 200);

}  // namespace nozzle
