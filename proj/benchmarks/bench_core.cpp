#include <benchmark/benchmark.h>

#include <vector>

#include "subrv/bcv.hpp"
#include "subrv/frames.hpp"
#include "subrv/functionals.hpp"
#include "subrv/quadrature.hpp"
#include "subrv/surface.hpp"
#include "subrv/twisted.hpp"

using namespace subrv;

namespace {

const std::vector<double> kPoint3{0.3, -0.4, 0.2};
const std::vector<double> kPoint4{0.1, -0.2, 0.3, 0.05};

void BM_BcvClosedConnection(benchmark::State& st) {
  const BcvParams p{0.5, 1.0, 2.0};
  for (auto _ : st) benchmark::DoNotOptimize(bcv_connection_closed(p, kPoint3));
}
BENCHMARK(BM_BcvClosedConnection);

void BM_BcvKoszulCurvature(benchmark::State& st) {
  const BcvParams p{0.5, 1.0, 2.0};
  const auto fr = bcv_frame(p);
  for (auto _ : st) benchmark::DoNotOptimize(frame_curvature(fr, kPoint3));
}
BENCHMARK(BM_BcvKoszulCurvature);

void BM_CoordinateCurvature(benchmark::State& st) {
  const auto g = bcv_metric({0.5, 1.0, 2.0});
  for (auto _ : st) benchmark::DoNotOptimize(riemann_ricci_scalar(g, kPoint3));
}
BENCHMARK(BM_CoordinateCurvature);

void BM_TwistedScalar(benchmark::State& st) {
  const auto spec = reference_twisted_specs()[0];
  for (auto _ : st) benchmark::DoNotOptimize(tw_scalar(spec, kPoint4));
}
BENCHMARK(BM_TwistedScalar);

void BM_TwistedScalarOracle(benchmark::State& st) {
  const auto spec = reference_twisted_specs()[0];
  for (auto _ : st) benchmark::DoNotOptimize(oracle_scalar(spec, kPoint4));
}
BENCHMARK(BM_TwistedScalarOracle);

void BM_CTerms(benchmark::State& st) {
  const auto spec = reference_twisted_specs()[0];
  const auto x = [](int i) { return ScalarField::coord(4, i); };
  const auto f1 = sin(x(0) + 0.5 * x(2)) + x(1) * x(3);
  const auto f2 = exp(0.3 * x(1)) + x(0) * x(2) * x(2);
  for (auto _ : st) benchmark::DoNotOptimize(tw_c_terms(spec, f1, f2, kPoint4));
}
BENCHMARK(BM_CTerms);

void BM_GaussSectional(benchmark::State& st) {
  const auto s0 = ScalarField::coord(2, 0), s1 = ScalarField::coord(2, 1);
  const auto phi = 0.5 * s0 * s1;
  const auto surf = graph_surface(phi, {1.0, 1.0, 4.0});
  const std::vector<double> p{0.6, -0.4, phi.value(std::vector<double>{0.6, -0.4})};
  for (auto _ : st) benchmark::DoNotOptimize(gauss_sectional(surf, p));
}
BENCHMARK(BM_GaussSectional);

void BM_GaussLegendreBox(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  const Box box{{0, 0, 0, 0}, {1, 1, 1, 1}, {n, n, n, n}};
  const Density d = [](std::span<const double> x) { return x[0] * x[1] + x[2] * x[3] * x[3]; };
  for (auto _ : st) benchmark::DoNotOptimize(integrate_box(d, box));
}
BENCHMARK(BM_GaussLegendreBox)->Arg(3)->Arg(6)->Arg(12);

void BM_KkwRefereeSingleL(benchmark::State& st) {
  const auto s = default_referee_setup(2, 2);
  const std::vector<double> Ls{1e4};
  for (auto _ : st) benchmark::DoNotOptimize(kkw_referee(s.warped, s.grid, Ls));
}
BENCHMARK(BM_KkwRefereeSingleL)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
