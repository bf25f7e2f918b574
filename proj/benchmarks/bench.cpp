#include <benchmark/benchmark.h>

#include "qmono/measures.hpp"
#include "qmono/monogamy.hpp"
#include "qmono/roof.hpp"
#include "qmono/sampling.hpp"
#include "qmono/tail.hpp"

using namespace qmono;

namespace {

RoofConfig bench_cfg() {
  RoofConfig cfg;
  cfg.restarts = 4;
  cfg.threads = 1;
  cfg.seed = 7;
  return cfg;
}

void bm_wootters(benchmark::State& state) {
  const DensityMatrix rho = sample_hs_density({2, 2}, 4, 11);
  for (auto _ : state) benchmark::DoNotOptimize(wootters_analysis(rho));
}
BENCHMARK(bm_wootters);

void bm_roof_min(benchmark::State& state) {
  const int rank = static_cast<int>(state.range(0));
  const DensityMatrix rho = sample_hs_density({2, 2}, rank, 13);
  const Cut cut = head_cut(2);
  const RoofConfig cfg = bench_cfg();
  for (auto _ : state)
    benchmark::DoNotOptimize(
        roof_optimize(rho, MeasureId::concurrence(), cut, RoofMode::min, cfg));
  state.SetLabel("rank " + std::to_string(rank));
}
BENCHMARK(bm_roof_min)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

void bm_zero_g_tail(benchmark::State& state) {
  const DensityMatrix rho = sample_hs_density({2, 2}, 3, 17);
  for (auto _ : state) benchmark::DoNotOptimize(zero_g_tail(rho));
}
BENCHMARK(bm_zero_g_tail);

void bm_monogamy_deficit(benchmark::State& state) {
  const PureState psi = sample_haar_pure({2, 2, 2}, 19);
  DensityMatrix rho;
  rho.dims = psi.dims;
  rho.matrix = psi.amplitudes * psi.amplitudes.adjoint();
  const MeasureTriple ev = make_evaluators(MeasureId::concurrence(), bench_cfg());
  for (auto _ : state) benchmark::DoNotOptimize(monogamy_deficit(rho, ev, 2.0));
}
BENCHMARK(bm_monogamy_deficit);

void bm_negativity(benchmark::State& state) {
  const DensityMatrix rho = sample_hs_density({2, 2, 2}, 8, 23);
  const Cut cut = head_cut(3);
  for (auto _ : state) benchmark::DoNotOptimize(negativity(rho, cut));
}
BENCHMARK(bm_negativity);

}  // namespace

BENCHMARK_MAIN();
