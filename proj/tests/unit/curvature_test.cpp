#include <gtest/gtest.h>

#include <random>

#include "curveprobe/curvature.hpp"
#include "curveprobe/synth.hpp"
#include "fixtures.hpp"

namespace curveprobe {
namespace {

using testing::make_graph;

struct FrozenEdge {
  NodeId i, j;
  Rational value;
};

// Reference values enumerated independently (Python, exact fractions).
void expect_frozen(const Graph& g, const std::vector<FrozenEdge>& frozen) {
  for (const auto& f : frozen) {
    EXPECT_EQ(bfc_exact(g, f.i, f.j), f.value) << g.id() << " (" << f.i << "," << f.j << ")";
    EXPECT_EQ(bfc_bruteforce_exact(g, f.i, f.j), f.value) << g.id() << " (" << f.i << "," << f.j << ")";
  }
}

TEST(MotifCounts, K4Edge) {
  auto g = testing::complete_graph(4);
  auto m = motif_counts(g, 0, 1);
  EXPECT_EQ(m.triangles, 2u);
  EXPECT_EQ(m.squares_i, 0u);
  EXPECT_EQ(m.squares_j, 0u);
  EXPECT_EQ(m.gamma_max, 0u);
}

TEST(MotifCounts, C4Edge) {
  auto m = motif_counts(testing::cycle_graph(4), 0, 1);
  EXPECT_EQ(m.triangles, 0u);
  EXPECT_EQ(m.squares_i, 1u);
  EXPECT_EQ(m.squares_j, 1u);
  EXPECT_EQ(m.gamma_max, 1u);
}

TEST(MotifCounts, BarbellBridgeHasNoMotifs) {
  auto g = gen_barbell_graph(BarbellSpec{}, 0);
  EXPECT_EQ(motif_counts(g, 3, 4), MotifCounts{});
}

TEST(MotifCounts, DiagonalDisqualifiesCycle) {
  // 0-1-2-3-0 with chord 1-3: the chord makes 3 adjacent to both endpoints of (0,1).
  auto g = make_graph(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}, {1, 3}});
  auto m = motif_counts(g, 0, 1);
  EXPECT_EQ(m.triangles, 1u);
  EXPECT_EQ(m.squares_i, 0u);
  EXPECT_EQ(m.squares_j, 0u);
}

TEST(Bfc, ClosedFormCases) {
  EXPECT_EQ(bfc_exact(make_graph(2, {{0, 1}}), 0, 1), Rational(2));
  EXPECT_DOUBLE_EQ(bfc_edge(make_graph(2, {{0, 1}}), 1, 0), 2.0);
  EXPECT_EQ(bfc_exact(gen_barbell_graph(BarbellSpec{}, 0), 3, 4), Rational(-1));
  EXPECT_EQ(bfc_exact(testing::complete_graph(4), 0, 1), Rational(4, 3));
  EXPECT_EQ(bfc_exact(testing::cycle_graph(4), 0, 1), Rational(1));
}

TEST(Bfc, SmallFixturesMatchReference) {
  expect_frozen(make_graph(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 0}, {1, 4}}, "house"),
                {{0, 1, {5, 6}}, {0, 4, {5, 6}}, {1, 2, {1, 3}}, {1, 4, Rational(1)}, {2, 3, Rational(1)},
                 {3, 4, {1, 3}}});
  expect_frozen(make_graph(5, {{0, 2}, {0, 3}, {0, 4}, {1, 2}, {1, 3}, {1, 4}}, "k23"),
                {{0, 2, {1, 6}}, {1, 4, {1, 6}}});
  expect_frozen(make_graph(6, {{0, 1}, {0, 2}, {0, 3}, {0, 4}, {0, 5}, {1, 2}, {1, 5}, {2, 3}, {3, 4}, {4, 5}},
                           "wheel5"),
                {{0, 1, {8, 15}}, {0, 4, {8, 15}}, {1, 2, {1, 3}}, {4, 5, {1, 3}}});
  expect_frozen(testing::cycle_graph(5), {{0, 1, Rational(0)}});
  expect_frozen(testing::cycle_graph(6), {{2, 3, Rational(0)}});
}

TEST(Bfc, CubeAndPetersen) {
  std::vector<std::pair<NodeId, NodeId>> cube;
  for (NodeId a = 0; a < 8; ++a)
    for (NodeId bit = 1; bit < 8; bit <<= 1)
      if ((a ^ bit) > a) cube.emplace_back(a, a ^ bit);
  auto q3 = make_graph(8, cube, "cube");
  for (const auto& e : bfc_all(q3)) EXPECT_EQ(e.exact, Rational(2, 3));

  auto petersen = make_graph(10, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 0}, {0, 5}, {1, 6}, {2, 7},
                                  {3, 8}, {4, 9}, {5, 7}, {7, 9}, {9, 6}, {6, 8}, {8, 5}},
                             "petersen");
  for (const auto& e : bfc_all(petersen)) EXPECT_EQ(e.exact, Rational(-2, 3));
}

TEST(Bfc, BarbellCliqueValues) {
  struct Row {
    std::size_t k;
    Rational bridge, inner, attached;
  };
  const std::vector<Row> rows{{3, {-2, 3}, {3, 2}, {5, 6}},      {4, Rational(-1), {4, 3}, {5, 6}},
                              {5, {-6, 5}, {5, 4}, {17, 20}},    {6, {-4, 3}, {6, 5}, {13, 15}},
                              {7, {-10, 7}, {7, 6}, {37, 42}},   {8, {-3, 2}, {8, 7}, {25, 28}}};
  for (const auto& r : rows) {
    BarbellSpec spec;
    spec.clique_size = r.k;
    spec.feature_dim = 4;
    auto g = gen_barbell_graph(spec, 0);
    const NodeId k = static_cast<NodeId>(r.k);
    EXPECT_EQ(bfc_exact(g, k - 1, k), r.bridge) << "k=" << r.k;
    EXPECT_EQ(bfc_exact(g, 0, 1), r.inner) << "k=" << r.k;
    EXPECT_EQ(bfc_exact(g, 0, k - 1), r.attached) << "k=" << r.k;
  }
}

TEST(Bfc, StandardBarbellHasSingleNegativeEdge) {
  auto all = bfc_all(gen_barbell_graph(BarbellSpec{}, 0));
  ASSERT_EQ(all.size(), 13u);
  std::size_t negative = 0;
  for (const auto& e : all) {
    if (e.exact < Rational(0)) {
      ++negative;
      EXPECT_EQ(e.ref.endpoints, (Edge{3, 4}));
      EXPECT_DOUBLE_EQ(e.bfc, -1.0);
    }
  }
  EXPECT_EQ(negative, 1u);
}

TEST(Bfc, PathOfFour) {
  auto all = bfc_all(testing::path_graph(4));
  ASSERT_EQ(all.size(), 3u);
  EXPECT_DOUBLE_EQ(all[0].bfc, 1.0);
  EXPECT_DOUBLE_EQ(all[1].bfc, 0.0);
  EXPECT_DOUBLE_EQ(all[2].bfc, 1.0);
}

TEST(Bfc, EmptyGraph) {
  EXPECT_TRUE(bfc_all(make_graph(3, {})).empty());
  auto gc = graph_curvature(make_graph(3, {}));
  EXPECT_TRUE(gc.edges.empty());
  EXPECT_TRUE(gc.bfc.empty());
}

TEST(Bfc, OutputIsCanonicalOrder) {
  auto g = make_graph(5, {{4, 3}, {2, 0}, {1, 0}, {3, 1}});
  auto gc = graph_curvature(g);
  EXPECT_TRUE(std::is_sorted(gc.edges.begin(), gc.edges.end()));
  EXPECT_EQ(gc.graph_id, "g");
}

TEST(Bfc, SymmetricInEndpoints) {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 40; ++t) {
    auto g = testing::erdos_renyi(9, 0.45, rng);
    for (const Edge& e : g.edges()) EXPECT_EQ(bfc_exact(g, e.u, e.v), bfc_exact(g, e.v, e.u));
  }
}

TEST(BfcOracle, AgreesOnRandomGraphs) {
  std::mt19937_64 rng(20240611);
  std::uniform_int_distribution<std::size_t> size(2, 10);
  for (double p : {0.2, 0.4, 0.6}) {
    for (int t = 0; t < 60; ++t) {
      auto g = testing::erdos_renyi(size(rng), p, rng);
      for (const Edge& e : g.edges()) {
        EXPECT_EQ(motif_counts(g, e.u, e.v), motif_counts_bruteforce(g, e.u, e.v));
        EXPECT_EQ(bfc_exact(g, e.u, e.v), bfc_bruteforce_exact(g, e.u, e.v));
      }
    }
  }
}

TEST(BfcOracle, TriangleAndSquare) {
  auto k3 = testing::complete_graph(3);
  auto c4 = testing::cycle_graph(4);
  EXPECT_EQ(bfc_bruteforce(k3, 0, 1), bfc_edge(k3, 0, 1));
  EXPECT_EQ(bfc_bruteforce(c4, 0, 1), bfc_edge(c4, 0, 1));
}

TEST(BfcOracle, RejectsNonEdge) {
  auto g = testing::path_graph(3);
  EXPECT_ANY_THROW(bfc_edge(g, 0, 2));
  EXPECT_ANY_THROW(bfc_bruteforce(g, 0, 2));
}

TEST(CurvatureSummary, Cases) {
  auto make = [](std::vector<std::int64_t> vals) {
    std::vector<EdgeCurvature> out;
    NodeId n = 0;
    for (auto v : vals) {
      out.push_back({{"g", {n, static_cast<NodeId>(n + 1)}}, Rational(v), static_cast<double>(v)});
      ++n;
    }
    return out;
  };
  auto uniform = curvature_summary(make({-1, 1}));
  EXPECT_DOUBLE_EQ(uniform.weighted_mean, 0.0);
  EXPECT_DOUBLE_EQ(uniform.negative_fraction, 0.5);
  auto weighted = curvature_summary(make({-1, 1}), std::vector<double>{3, 1});
  EXPECT_DOUBLE_EQ(weighted.weighted_mean, -0.5);
  EXPECT_DOUBLE_EQ(weighted.negative_fraction, 0.75);
  EXPECT_DOUBLE_EQ(curvature_summary(make({1, 2, 0})).negative_fraction, 0.0);
  EXPECT_ANY_THROW(curvature_summary(make({1, 2}), std::vector<double>{1}));
}

}  // namespace
}  // namespace curveprobe
