#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "curveprobe/errors.hpp"
#include "curveprobe/spectral.hpp"
#include "fixtures.hpp"

namespace curveprobe {
namespace {

double gap(const Graph& g, SpectralOptions o = {}) { return spectral_gap(g.edges(), g.num_nodes(), o); }

TEST(SpectralGap, CompleteGraphs) {
  EXPECT_NEAR(gap(testing::complete_graph(4)), 4.0 / 3.0, 1e-12);
  for (std::size_t n = 3; n <= 12; ++n) {
    EXPECT_NEAR(gap(testing::complete_graph(n)), double(n) / double(n - 1), 1e-9) << n;
  }
}

TEST(SpectralGap, Cycles) {
  EXPECT_NEAR(gap(testing::cycle_graph(4)), 1.0, 1e-12);
  for (std::size_t n = 3; n <= 20; ++n) {
    EXPECT_NEAR(gap(testing::cycle_graph(n)), 1.0 - std::cos(2.0 * std::numbers::pi / double(n)), 1e-9) << n;
  }
}

TEST(SpectralGap, UnnormalizedCompleteGraph) {
  SpectralOptions o;
  o.laplacian = LaplacianKind::Unnormalized;
  EXPECT_NEAR(gap(testing::complete_graph(6), o), 6.0, 1e-9);
}

TEST(SpectralGap, DisconnectedIsZero) {
  auto two = testing::make_graph(6, {{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}});
  SpectralOptions all;
  all.largest_component = false;
  EXPECT_NEAR(gap(two, all), 0.0, 1e-12);
  EXPECT_NEAR(gap(two), 1.5, 1e-12);
}

TEST(SpectralGap, LargestComponentIgnoresIsolatedNodes) {
  auto g = testing::make_graph(7, {{0, 1}, {1, 2}, {2, 3}, {3, 0}});
  EXPECT_NEAR(gap(g), 1.0, 1e-12);
}

TEST(SpectralGap, MatchesJacobiOracle) {
  std::mt19937_64 rng(99);
  for (int t = 0; t < 30; ++t) {
    auto g = testing::erdos_renyi(12, 0.5, rng);
    if (g.num_edges() == 0) continue;
    SpectralOptions all;
    all.largest_component = false;
    auto spectrum = laplacian_spectrum(g.edges(), g.num_nodes(), all);
    auto lap = testing::normalized_laplacian(g);
    std::vector<std::vector<double>> support;
    std::vector<std::size_t> keep;
    for (NodeId i = 0; i < g.num_nodes(); ++i)
      if (g.degree(i) > 0) keep.push_back(i);
    for (auto r : keep) {
      support.emplace_back();
      for (auto c : keep) support.back().push_back(lap[r][c]);
    }
    auto oracle = testing::jacobi_eigenvalues(support);
    ASSERT_EQ(spectrum.size(), oracle.size());
    for (std::size_t i = 0; i < oracle.size(); ++i) EXPECT_NEAR(spectrum[i], oracle[i], 1e-9);
  }
}

TEST(SpectralGap, Errors) {
  SpectralOptions small;
  small.max_nodes = 5;
  EXPECT_THROW(gap(testing::complete_graph(6), small), CapabilityError);
  EXPECT_THROW(gap(testing::make_graph(3, {})), ValidationError);
  std::vector<Edge> bad{{0, 9}};
  EXPECT_THROW(spectral_gap(bad, 3), ValidationError);
}

}  // namespace
}  // namespace curveprobe
