#include <benchmark/benchmark.h>

#include <cmath>

#include "nozzle/kernels.hpp"
#include "nozzle/setup.hpp"

using namespace nozzle;

namespace {

const GasModel kModel{};

GasState upstream() { return upstream_state(kModel, 1.0, 1.0, 2.0); }

struct CoeffCase {
  int nx, ny;
  std::vector<double> p, theta, q, s, s_row, psi, slope;
  CoefficientInput input() {
    return {nx, ny, 0.5, 1.0, 0.5 / nx, p.data(), theta.data(), q.data(), s.data(),
            s_row.data(), psi.data(), slope.data()};
  }
};

CoeffCase make_case(int nx, int ny) {
  const BackgroundShock bg = build_background(kModel, upstream());
  CoeffCase c{nx, ny, {}, {}, {}, {}, {}, {}, {}};
  const int n = (nx + 1) * (ny + 1);
  c.p.assign(n, bg.u_plus_bar.p);
  c.theta.assign(n, 0.0);
  c.q.assign(n, bg.u_plus_bar.q);
  c.s.assign(n, bg.u_plus_bar.s);
  for (int k = 0; k < n; ++k) c.theta[k] = 0.01 * std::sin(0.001 * k);
  c.s_row.assign(ny + 1, 1.0);
  c.psi.assign(ny + 1, 0.5);
  c.slope.assign(ny + 1, 0.0);
  return c;
}

void BM_coefficients(benchmark::State& st, Exec ex) {
  CoeffCase c = make_case(static_cast<int>(st.range(0)), static_cast<int>(st.range(0)) / 2);
  const CoefficientInput in = c.input();
  for (auto _ : st) benchmark::DoNotOptimize(evaluate_coefficients(ex, kModel, in));
}

void BM_assemble(benchmark::State& st, Exec ex) {
  CoeffCase c = make_case(static_cast<int>(st.range(0)), static_cast<int>(st.range(0)) / 2);
  const CoefficientOutput co = evaluate_coefficients(Exec::Serial, kModel, c.input());
  const double hx = 0.5 / c.nx, hy = 1.0 / c.ny;
  for (auto _ : st)
    benchmark::DoNotOptimize(assemble_interior(ex, c.nx, c.ny, hx, hy, co.c11.data(),
                                               co.c12.data(), co.c22.data()));
}

void BM_polar(benchmark::State& st, Exec ex) {
  const GasState um = upstream();
  for (auto _ : st)
    benchmark::DoNotOptimize(sample_polar(ex, kModel, um, static_cast<int>(st.range(0))));
}

void BM_lw_step(benchmark::State& st, Exec ex) {
  const int ny = static_cast<int>(st.range(0));
  std::vector<double> p(ny + 1, 0.0), th(ny + 1, 0.0), sp(ny + 1, 0.0), sth(ny + 1, 0.0);
  for (int j = 0; j <= ny; ++j) p[j] = std::sin(3.0 * j / ny);
  std::vector<double> p2(ny + 1), th2(ny + 1);
  const LwStep step{1.0, 1.0, 0.5 / ny, 1.0 / ny, 0.0};
  for (auto _ : st) {
    lw_step(ex, step, ny, p.data(), th.data(), sp.data(), sth.data(), sp.data(), sth.data(),
            p2.data(), th2.data());
    benchmark::DoNotOptimize(p2.data());
  }
}

}  // namespace

BENCHMARK_CAPTURE(BM_coefficients, serial, Exec::Serial)->Arg(128)->Arg(512);
BENCHMARK_CAPTURE(BM_coefficients, parallel, Exec::Parallel)->Arg(128)->Arg(512);
BENCHMARK_CAPTURE(BM_assemble, serial, Exec::Serial)->Arg(128)->Arg(512);
BENCHMARK_CAPTURE(BM_assemble, parallel, Exec::Parallel)->Arg(128)->Arg(512);
BENCHMARK_CAPTURE(BM_polar, serial, Exec::Serial)->Arg(200);
BENCHMARK_CAPTURE(BM_polar, parallel, Exec::Parallel)->Arg(200);
BENCHMARK_CAPTURE(BM_lw_step, serial, Exec::Serial)->Arg(1024);
BENCHMARK_CAPTURE(BM_lw_step, parallel, Exec::Parallel)->Arg(1024);

BENCHMARK_MAIN();
