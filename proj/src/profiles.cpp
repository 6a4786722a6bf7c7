#include "nozzle/profiles.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "nozzle/errors.hpp"

namespace nozzle {

namespace {

std::vector<double> sample(int n, auto&& f) {
  std::vector<double> v(n + 1);
  for (int i = 0; i <= n; ++i) v[i] = f(static_cast<double>(i) / n);
  return v;
}

double parse_number(const std::string& s, const std::string& ctx) {
  try {
    size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    fail(ErrorKind::Input, "cannot parse number '" + s + "' in " + ctx);
  }
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

Profile::Profile(std::vector<double> samples) : v_(std::move(samples)) {
  if (v_.size() < 4) {
    fail(ErrorKind::Input, "profile needs at least 4 samples, got " +
                               std::to_string(v_.size()));
  }
  for (double x : v_) {
    if (!std::isfinite(x)) fail(ErrorKind::Input, "profile has non-finite sample");
  }
  build_slopes();
}

void Profile::build_slopes() {
  const int n = intervals();
  const double h = spacing();
  slope_.assign(n + 1, 0.0);
  for (int i = 1; i < n; ++i) slope_[i] = (v_[i + 1] - v_[i - 1]) / (2.0 * h);
  slope_[0] = d1_left();
  slope_[n] = d1_right();
}

Profile Profile::zero(int n) {
  return Profile(std::vector<double>(n + 1, 0.0));
}

Profile Profile::constant(double c, int n) {
  return Profile(std::vector<double>(n + 1, c));
}

Profile Profile::affine(double a, double b, int n) {
  return Profile(sample(n, [&](double x) { return a + b * x; }));
}

Profile Profile::bump(double amp, int n) {
  const double pi = 3.14159265358979323846;
  return Profile(sample(n, [&](double x) {
    const double s = std::sin(pi * x);
    return amp * s * s;
  }));
}

Profile Profile::parse(const std::string& spec_in) {
  const std::string spec = trim(spec_in);
  if (spec == "zero" || spec.empty()) return zero();
  const auto colon = spec.find(':');
  if (colon != std::string::npos) {
    const std::string name = spec.substr(0, colon);
    const std::string args = spec.substr(colon + 1);
    if (name == "const") return constant(parse_number(trim(args), spec));
    if (name == "bump") return bump(parse_number(trim(args), spec));
    if (name == "affine") {
      const auto comma = args.find(',');
      if (comma == std::string::npos)
        fail(ErrorKind::Input, "affine profile needs 'affine:a,b', got " + spec);
      return affine(parse_number(trim(args.substr(0, comma)), spec),
                    parse_number(trim(args.substr(comma + 1)), spec));
    }
  }
  return from_csv(spec);
}

Profile Profile::from_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::Input, "cannot open profile '" + path + "'");
  std::vector<double> xs, vs;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    std::vector<std::string> cols;
    std::stringstream ss(t);
    std::string cell;
    while (std::getline(ss, cell, ',')) cols.push_back(trim(cell));
    const std::string where = path + ":" + std::to_string(lineno);
    if (cols.size() != 2) {
      fail(ErrorKind::Input, where + ": expected 2 columns (x2,value), got " +
                                 std::to_string(cols.size()));
    }
    // header row
    if (xs.empty() && !cols[0].empty() &&
        (std::isalpha(static_cast<unsigned char>(cols[0][0])) != 0)) {
      continue;
    }
    xs.push_back(parse_number(cols[0], where));
    vs.push_back(parse_number(cols[1], where));
  }
  if (xs.size() < 4) {
    fail(ErrorKind::Input, path + ": profile needs at least 4 rows");
  }
  const int n = static_cast<int>(xs.size()) - 1;
  for (int i = 0; i <= n; ++i) {
    const double expect = static_cast<double>(i) / n;
    if (std::abs(xs[i] - expect) > 1e-9) {
      fail(ErrorKind::Input, path + ": x2 samples must be uniform on [0,1]; row " +
                                 std::to_string(i + 1) + " has x2=" +
                                 std::to_string(xs[i]));
    }
  }
  return Profile(std::move(vs));
}

double Profile::operator()(double x) const {
  const int n = intervals();
  x = std::clamp(x, 0.0, 1.0);
  const double h = spacing();
  int i = std::min(static_cast<int>(x / h), n - 1);
  const double t = (x - i * h) / h;
  const double t2 = t * t, t3 = t2 * t;
  const double h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + t;
  const double h01 = -2 * t3 + 3 * t2, h11 = t3 - t2;
  return h00 * v_[i] + h10 * h * slope_[i] + h01 * v_[i + 1] +
         h11 * h * slope_[i + 1];
}

double Profile::derivative(double x) const {
  const int n = intervals();
  x = std::clamp(x, 0.0, 1.0);
  const double h = spacing();
  int i = std::min(static_cast<int>(x / h), n - 1);
  const double t = (x - i * h) / h;
  const double t2 = t * t;
  const double d00 = 6 * t2 - 6 * t, d10 = 3 * t2 - 4 * t + 1;
  const double d01 = -6 * t2 + 6 * t, d11 = 3 * t2 - 2 * t;
  return (d00 * v_[i] + d01 * v_[i + 1]) / h + d10 * slope_[i] +
         d11 * slope_[i + 1];
}

namespace {

// one-sided stencils on f0, f1, ... stepping away from the end
double d1_end(const std::vector<double>& f, double h) {
  if (f.size() < 5) return (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h);
  return (-11.0 * f[0] + 18.0 * f[1] - 9.0 * f[2] + 2.0 * f[3]) / (6.0 * h);
}

double d2_end(const std::vector<double>& f, double h) {
  if (f.size() < 5) return (2.0 * f[0] - 5.0 * f[1] + 4.0 * f[2] - f[3]) / (h * h);
  return (35.0 * f[0] - 104.0 * f[1] + 114.0 * f[2] - 56.0 * f[3] + 11.0 * f[4]) /
         (12.0 * h * h);
}

std::vector<double> head(const std::vector<double>& v) {
  return {v.begin(), v.begin() + std::min<size_t>(5, v.size())};
}

std::vector<double> tail(const std::vector<double>& v) {
  std::vector<double> r(v.rbegin(), v.rbegin() + std::min<size_t>(5, v.size()));
  return r;
}

}  // namespace

double Profile::d1_left() const { return d1_end(head(v_), spacing()); }

double Profile::d1_right() const { return -d1_end(tail(v_), spacing()); }

double Profile::d2_left() const { return d2_end(head(v_), spacing()); }

double Profile::d2_right() const { return d2_end(tail(v_), spacing()); }

bool Profile::is_zero() const {
  return std::all_of(v_.begin(), v_.end(), [](double x) { return x == 0.0; });
}

}  // namespace nozzle
