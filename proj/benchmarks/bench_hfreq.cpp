#include "hfreq/horizontal.hpp"
#include "hfreq/kernel.hpp"
#include "hfreq/parallel.hpp"
#include "hfreq/transform.hpp"
#include "hfreq/wigner.hpp"

#include <benchmark/benchmark.h>

using namespace hfreq;

namespace {

void BM_WignerPoint(benchmark::State& state) {
  const FrequencyPoint w(MultiIndex({int(state.range(0))}),
                         MultiIndex({int(state.range(0))}), 0.7);
  const PhasePoint Y({0.6}, {-0.4});
  WignerEvalSpec spec;
  spec.method = WignerMethod::quadrature;
  for (auto _ : state) benchmark::DoNotOptimize(wigner_w(w, Y, spec));
}
BENCHMARK(BM_WignerPoint)->Arg(8)->Arg(32)->Arg(128);

void BM_WignerSweep(benchmark::State& state) {
  std::vector<complexd> out;
  for (auto _ : state) {
    wigner_all_1d(int(state.range(0)), 0.7, 0.6, -0.4, out);
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(BM_WignerSweep)->Arg(24)->Arg(64);

void BM_ForwardField(benchmark::State& state) {
  const auto f = GaussHermiteFunction::gaussian(1, 1.0, 1.0);
  const auto grid = FrequencyGrid::make(1, int(state.range(0)), 1e-3, 8.0, 8, 12);
  set_max_threads(1);
  for (auto _ : state) {
    const auto F = forward_field(f, grid, {.compute_l1 = false});
    benchmark::DoNotOptimize(F.values.data());
  }
}
BENCHMARK(BM_ForwardField)->Arg(24)->Arg(96);

void BM_KernelCircle(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(kernel_K(1.3, int(state.range(0)), 0.8, -0.5));
}
BENCHMARK(BM_KernelCircle)->Arg(0)->Arg(6);

void BM_GhTransform(benchmark::State& state) {
  auto g = HorizontalFunction::gaussian(1, 1.0);
  g.add_term(0.5, {1, 1});
  for (auto _ : state) benchmark::DoNotOptimize(gh_transform(g, {1.7}, {2}));
}
BENCHMARK(BM_GhTransform);

void BM_PairingMatrix(benchmark::State& state) {
  for (auto _ : state) {
    auto P = wigner_pairing_matrix(1, 2, 1.0, 0.45, int(state.range(0)));
    benchmark::DoNotOptimize(P.data());
  }
}
BENCHMARK(BM_PairingMatrix)->Arg(24)->Arg(128);

} // namespace

BENCHMARK_MAIN();
