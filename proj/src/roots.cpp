#include "nozzle/roots.hpp"

#include <cmath>
#include <sstream>

#include "nozzle/errors.hpp"

namespace nozzle {

RootResult bisect(const std::function<double(double)>& f, double lo, double hi,
                  double xtol, int max_iter) {
  return bisect(f, lo, hi, f(lo), f(hi), xtol, max_iter);
}

RootResult bisect(const std::function<double(double)>& f, double lo, double hi,
                  double flo, double fhi, double xtol, int max_iter) {
  if (flo == 0.0) return {lo, 0.0, 0};
  if (fhi == 0.0) return {hi, 0.0, 0};
  if (std::signbit(flo) == std::signbit(fhi)) {
    std::ostringstream os;
    os << "bisect: no sign change on [" << lo << ", " << hi << "] (f=" << flo
       << ", " << fhi << ")";
    fail(ErrorKind::NoRoot, os.str());
  }
  int it = 0;
  double mid = 0.5 * (lo + hi), fm = 0.0;
  for (; it < max_iter; ++it) {
    mid = 0.5 * (lo + hi);
    fm = f(mid);
    if (fm == 0.0) break;
    if (std::signbit(fm) == std::signbit(flo)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
    if (hi - lo <= xtol) {
      mid = 0.5 * (lo + hi);
      fm = f(mid);
      break;
    }
  }
  return {mid, fm, it};
}

}  // namespace nozzle
