#pragma once

#include <string>
#include <vector>

namespace nozzle {

// Scalar profile sampled on a uniform grid over [0, 1].
class Profile {
 public:
  Profile() = default;
  explicit Profile(std::vector<double> samples);

  static Profile zero(int n = 64);
  static Profile constant(double c, int n = 64);
  static Profile affine(double a, double b, int n = 64);  // a + b x
  static Profile bump(double amp, int n = 256);           // amp sin^2(pi x)
  // Builtin name ("zero", "const:c", "affine:a,b", "bump:amp") or CSV path.
  static Profile parse(const std::string& spec);
  static Profile from_csv(const std::string& path);

  double operator()(double x) const;
  double derivative(double x) const;

  int intervals() const { return static_cast<int>(v_.size()) - 1; }
  double spacing() const { return 1.0 / intervals(); }
  const std::vector<double>& samples() const { return v_; }

  // third-order one-sided estimates (second-order below 5 samples) at x = 0 and x = 1
  double d1_left() const;
  double d1_right() const;
  double d2_left() const;
  double d2_right() const;

  bool is_zero() const;

 private:
  std::vector<double> v_;
  std::vector<double> slope_;
  void build_slopes();
};

struct InflowPerturbation {
  Profile p0, theta0, q0, s0;
};

}  // namespace nozzle
