#include <benchmark/benchmark.h>

#include "hatk/analysis.hpp"
#include "hatk/bench.hpp"
#include "hatk/operators.hpp"

namespace {

using namespace hatk;

GridFunction input(std::size_t n, std::uint64_t seed, int dim = 1) {
  SampleGrid g(n, 1.0, dim);
  return bench::random_band_limited(g, seed, static_cast<double>(n) / 16.0);
}

void BM_Fft(benchmark::State& state) {
  auto f = input(static_cast<std::size_t>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(fourier_transform(f));
}
BENCHMARK(BM_Fft)->RangeMultiplier(4)->Range(256, 16384);

void BM_Telescoping1d(benchmark::State& state) {
  auto n = static_cast<std::size_t>(state.range(0));
  auto f = input(n, 1), g = input(n, 2);
  for (auto _ : state) benchmark::DoNotOptimize(telescoping_decomposition(f, g));
}
BENCHMARK(BM_Telescoping1d)->Arg(1024)->Arg(4096);

void BM_Telescoping2d(benchmark::State& state) {
  auto f = input(128, 1, 2), g = input(128, 2, 2);
  for (auto _ : state) benchmark::DoNotOptimize(telescoping_decomposition(f, g));
}
BENCHMARK(BM_Telescoping2d)->Unit(benchmark::kMillisecond);

void BM_DiscretizedParaproduct(benchmark::State& state) {
  auto n = static_cast<std::size_t>(state.range(0));
  auto f = input(n, 1), g = input(n, 2);
  auto spec = ParaproductSpec::unit(full_dyadic_family(f.grid(), {PacketFlavor::non_lacunary, PacketFlavor::lacunary, PacketFlavor::lacunary}));
  for (auto _ : state) benchmark::DoNotOptimize(discretized_paraproduct(spec, f, g));
}
BENCHMARK(BM_DiscretizedParaproduct)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);

void BM_AlphaParaproduct(benchmark::State& state) {
  auto f = input(1024, 1), g = input(1024, 2);
  int nmax = alpha_default_nmax(0.5);
  for (auto _ : state) benchmark::DoNotOptimize(alpha_paraproduct(0.5, f, g, nmax));
}
BENCHMARK(BM_AlphaParaproduct)->Unit(benchmark::kMillisecond);

void BM_BhtKernel(benchmark::State& state) {
  auto n = static_cast<std::size_t>(state.range(0));
  SampleGrid grid(n);
  GridFunction f(grid), g(grid);
  for (std::size_t i = 0; i < n; ++i) {
    double x = (grid.coordinate(i) - 0.5) * 40.0;
    f[i] = std::exp(-x * x);
    g[i] = std::exp(-x * x) * std::polar(1.0, 0.3 * x);
  }
  for (auto _ : state) benchmark::DoNotOptimize(bht_kernel(f, g));
}
BENCHMARK(BM_BhtKernel)->Arg(1024)->Arg(4096)->Unit(benchmark::kMillisecond);

void BM_Maximal(benchmark::State& state) {
  auto f = input(static_cast<std::size_t>(state.range(0)), 3);
  for (auto _ : state) benchmark::DoNotOptimize(maximal(f));
}
BENCHMARK(BM_Maximal)->Arg(1024)->Unit(benchmark::kMillisecond);

void BM_RangeMembership(benchmark::State& state) {
  auto q = RangeQuery::parse("p=4,4 q=2,4 s=4/3,2");
  for (auto _ : state) benchmark::DoNotOptimize(bht_range_membership(q));
}
BENCHMARK(BM_RangeMembership);

}  // namespace

BENCHMARK_MAIN();
