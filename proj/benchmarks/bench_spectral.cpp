#include <benchmark/benchmark.h>

#include <random>

#include "curveprobe/spectral.hpp"
#include "fixtures.hpp"

using namespace curveprobe;

static void BM_SpectralGap(benchmark::State& state) {
  std::mt19937_64 rng(3);
  const auto n = static_cast<std::size_t>(state.range(0));
  const Graph g = testing::erdos_renyi(n, 6.0 / double(n), rng);
  for (auto _ : state) benchmark::DoNotOptimize(spectral_gap(g.edges(), g.num_nodes()));
}
BENCHMARK(BM_SpectralGap)->RangeMultiplier(2)->Range(16, 512)->Unit(benchmark::kMicrosecond);
