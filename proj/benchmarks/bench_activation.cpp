#include <benchmark/benchmark.h>

#include <random>

#include "curveprobe/activation.hpp"

using namespace curveprobe;

namespace {

ActivationLog dense_log(NodeId nodes, std::uint32_t layers, std::uint32_t heads) {
  std::mt19937_64 rng(4);
  std::lognormal_distribution<double> w(0.0, 1.0);
  ActivationLog log{"bench", "m", {}};
  for (std::uint32_t l = 0; l < layers; ++l)
    for (std::uint32_t h = 0; h < heads; ++h)
      for (NodeId s = 0; s < nodes; ++s)
        for (NodeId d = 0; d < nodes; ++d) log.records.push_back({l, h, s, d, w(rng)});
  return log;
}

}  // namespace

static void BM_ActivationRatios(benchmark::State& state) {
  const auto log = dense_log(static_cast<NodeId>(state.range(0)), 4, 4);
  for (auto _ : state) benchmark::DoNotOptimize(activation_ratios(log));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(log.records.size()));
}
BENCHMARK(BM_ActivationRatios)->Arg(16)->Arg(64);

static void BM_FlagMassive(benchmark::State& state) {
  const auto log = dense_log(static_cast<NodeId>(state.range(0)), 4, 4);
  std::vector<GraphRatios> ds{{log.graph_id, log.model, activation_ratios(log)}};
  for (auto _ : state) benchmark::DoNotOptimize(flag_massive(ds));
}
BENCHMARK(BM_FlagMassive)->Arg(16)->Arg(64);
