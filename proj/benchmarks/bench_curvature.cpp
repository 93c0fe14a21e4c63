#include <benchmark/benchmark.h>

#include <random>

#include "curveprobe/curvature.hpp"
#include "curveprobe/synth.hpp"
#include "fixtures.hpp"

using namespace curveprobe;

static void BM_BfcAllBarbell(benchmark::State& state) {
  BarbellSpec spec;
  spec.clique_size = static_cast<std::size_t>(state.range(0));
  spec.num_dummy_cliques = 3;
  const Graph g = gen_barbell_graph(spec, 0);
  for (auto _ : state) benchmark::DoNotOptimize(bfc_all(g));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(g.num_edges()));
}
BENCHMARK(BM_BfcAllBarbell)->Arg(4)->Arg(8)->Arg(16)->Arg(32);

static void BM_BfcAllRandom(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const auto n = static_cast<std::size_t>(state.range(0));
  const Graph g = testing::erdos_renyi(n, 8.0 / double(n), rng);
  for (auto _ : state) benchmark::DoNotOptimize(bfc_all(g));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(g.num_edges()));
}
BENCHMARK(BM_BfcAllRandom)->RangeMultiplier(4)->Range(64, 4096);

static void BM_BfcBruteforce(benchmark::State& state) {
  std::mt19937_64 rng(2);
  const Graph g = testing::erdos_renyi(10, 0.4, rng);
  for (auto _ : state)
    for (const Edge& e : g.edges()) benchmark::DoNotOptimize(bfc_bruteforce(g, e.u, e.v));
}
BENCHMARK(BM_BfcBruteforce);
