#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "nozzle/errors.hpp"
#include "nozzle/kernels.hpp"
#include "nozzle/setup.hpp"

using namespace nozzle;

namespace {

const GasModel kGas{};

struct CoeffFixture {
  int nx = 40, ny = 24;
  std::vector<double> p, th, q, s, s_row, psi_row, slope_row;
  CoeffFixture() {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    const int n = (nx + 1) * (ny + 1);
    for (int k = 0; k < n; ++k) {
      p.push_back(4.5 + 0.05 * d(rng));
      th.push_back(0.02 * d(rng));
      q.push_back(0.83 + 0.01 * d(rng));
      s.push_back(0.1 * d(rng));
    }
    for (int j = 0; j <= ny; ++j) {
      psi_row.push_back(0.49 + 0.01 * d(rng));
      s_row.push_back((1.0 - psi_row.back()) / 0.5);
      slope_row.push_back(0.01 * d(rng));
    }
  }
  CoefficientInput input() const {
    return {nx, ny, 0.5, 1.0, 0.5 / nx, p.data(), th.data(), q.data(), s.data(),
            s_row.data(), psi_row.data(), slope_row.data()};
  }
};

}  // namespace

TEST(Kernels, CoefficientsSerialEqualsParallel) {
  const CoeffFixture f;
  const CoefficientOutput a = evaluate_coefficients(Exec::Serial, kGas, f.input());
  const CoefficientOutput b = evaluate_coefficients(Exec::Parallel, kGas, f.input());
  EXPECT_EQ(a.c11, b.c11);
  EXPECT_EQ(a.c12, b.c12);
  EXPECT_EQ(a.c22, b.c22);
  EXPECT_EQ(a.lambda_min, b.lambda_min);
  EXPECT_EQ(a.mach2, b.mach2);
}

TEST(Kernels, CoefficientErrorNamesFirstBadNode) {
  CoeffFixture f;
  // supersonic at two nodes; the lower index must be reported in both modes
  const double fast = 3.0;
  f.q[f.input().nx + 1 + 7] = fast;
  f.q[5 * (f.nx + 1) + 3] = fast;
  for (Exec ex : {Exec::Serial, Exec::Parallel}) {
    try {
      evaluate_coefficients(ex, kGas, f.input());
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::Hypothesis);
      EXPECT_NE(std::string(e.what()).find("(i=7, j=1)"), std::string::npos) << e.what();
    }
  }
}

TEST(Kernels, StencilSerialEqualsParallel) {
  const CoeffFixture f;
  const CoefficientOutput c = evaluate_coefficients(Exec::Serial, kGas, f.input());
  const double hx = 0.5 / f.nx, hy = 1.0 / f.ny;
  const StencilRows a = assemble_interior(Exec::Serial, f.nx, f.ny, hx, hy, c.c11.data(),
                                          c.c12.data(), c.c22.data());
  const StencilRows b = assemble_interior(Exec::Parallel, f.nx, f.ny, hx, hy, c.c11.data(),
                                          c.c12.data(), c.c22.data());
  EXPECT_EQ(a.row, b.row);
  EXPECT_EQ(a.col, b.col);
  EXPECT_EQ(a.val, b.val);
  EXPECT_EQ(a.val.size(), 9u * (f.nx - 1) * (f.ny - 1));
}

TEST(Kernels, StencilAnnihilatesLinearsAndIsExactOnQuadratics) {
  const int nx = 10, ny = 8, w = nx + 1;
  const double hx = 0.1, hy = 0.125;
  std::vector<double> c11((nx + 1) * (ny + 1), 2.0), c12(c11.size(), 0.4), c22(c11.size(), 1.5);
  const StencilRows r = assemble_interior(Exec::Serial, nx, ny, hx, hy, c11.data(), c12.data(),
                                          c22.data());
  auto apply = [&](auto f) {
    double worst = 0.0;
    for (size_t k = 0; k < r.row.size(); k += 9) {
      double acc = 0.0;
      for (int m = 0; m < 9; ++m) {
        const int col = r.col[k + m];
        acc += r.val[k + m] * f((col % w) * hx, (col / w) * hy);
      }
      worst = std::max(worst, std::abs(acc - f.lap));
    }
    return worst;
  };
  struct Lin {
    double lap = 0.0;
    double operator()(double x, double y) const { return 1.0 + 3.0 * x - 2.0 * y; }
  };
  // 2 c11 + 2 c12 * 1 + 2 c22 for x^2 + x y + y^2
  struct Quad {
    double lap = 2 * 2.0 + 2 * 0.4 + 2 * 1.5;
    double operator()(double x, double y) const { return x * x + x * y + y * y; }
  };
  EXPECT_LT(apply(Lin{}), 1e-11);
  EXPECT_LT(apply(Quad{}), 1e-10);
}

TEST(Kernels, SampleFunctionMatchesAndPropagatesErrors) {
  std::vector<double> xs;
  for (int k = 0; k < 1000; ++k) xs.push_back(k * 1e-3);
  auto f = [](double x) { return std::sin(x) * std::exp(-x); };
  EXPECT_EQ(sample_function(Exec::Serial, f, xs), sample_function(Exec::Parallel, f, xs));
  auto bad = [](double x) {
    if (x > 0.5) fail(ErrorKind::NoRoot, "beyond half");
    return x;
  };
  for (Exec ex : {Exec::Serial, Exec::Parallel}) {
    try {
      sample_function(ex, bad, xs);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::NoRoot);
    }
  }
}

TEST(Kernels, PolarSamplingSerialEqualsParallel) {
  const GasState um = upstream_state(kGas, 1, 1, 2);
  const auto a = sample_polar(Exec::Serial, kGas, um, 150);
  const auto b = sample_polar(Exec::Parallel, kGas, um, 150);
  ASSERT_EQ(a.size(), b.size());
  for (size_t k = 0; k < a.size(); ++k) {
    EXPECT_EQ(a[k].theta, b[k].theta);
    EXPECT_EQ(a[k].p, b[k].p);
    EXPECT_EQ(a[k].mach_down, b[k].mach_down);
    EXPECT_EQ(a[k].branch, b[k].branch);
  }
  EXPECT_NEAR(a[150].p, 4.5, 1e-12);
  EXPECT_NEAR(a[150].theta, 0.0, 1e-7);
  EXPECT_THROW(sample_polar(Exec::Serial, kGas, um, 0), Error);
}

TEST(Kernels, LaxWendroffSerialEqualsParallel) {
  const int ny = 200;
  std::vector<double> p(ny + 1), th(ny + 1), sp0(ny + 1), st0(ny + 1), sp1(ny + 1), st1(ny + 1);
  for (int j = 0; j <= ny; ++j) {
    const double y = static_cast<double>(j) / ny;
    p[j] = std::cos(4 * y);
    th[j] = 0.01 * y + std::sin(3 * y) * y;
    sp0[j] = 0.1 * y;
    st0[j] = 0.05 * std::cos(y);
    sp1[j] = 0.11 * y;
    st1[j] = 0.06 * std::cos(y);
  }
  const LwStep k{1.3, 0.7, 0.004, 0.005, th[ny]};
  std::vector<double> pa(ny + 1), ta(ny + 1), pb(ny + 1), tb(ny + 1);
  lw_step(Exec::Serial, k, ny, p.data(), th.data(), sp0.data(), st0.data(), sp1.data(),
          st1.data(), pa.data(), ta.data());
  lw_step(Exec::Parallel, k, ny, p.data(), th.data(), sp0.data(), st0.data(), sp1.data(),
          st1.data(), pb.data(), tb.data());
  EXPECT_EQ(pa, pb);
  EXPECT_EQ(ta, tb);
  EXPECT_EQ(ta[0], 0.0);
  EXPECT_EQ(ta[ny], th[ny]);
}
