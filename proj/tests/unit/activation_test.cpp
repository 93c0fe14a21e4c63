#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "curveprobe/activation.hpp"
#include "curveprobe/activation_io.hpp"
#include "curveprobe/synth.hpp"
#include "fixtures.hpp"

namespace curveprobe {
namespace {

ActivationLog single_group(const std::vector<double>& weights) {
  ActivationLog log{"g", "m", {}};
  for (NodeId i = 0; i < weights.size(); ++i) log.records.push_back({0, 0, i, i, weights[i]});
  return log;
}

GraphRatios ratios_from_max(const std::string& id, const std::vector<double>& maxima) {
  GraphRatios gr{id, "m", {}};
  for (NodeId i = 0; i < maxima.size(); ++i) {
    gr.ratios.push_back({0, 0, i, i + 1, maxima[i] * 0.5});
    gr.ratios.push_back({1, 0, i, i + 1, maxima[i]});
  }
  return gr;
}

TEST(ActivationRatios, EqualWeightsGiveOne) {
  for (const auto& r : activation_ratios(single_group({0.3, 0.3, 0.3, 0.3}))) EXPECT_DOUBLE_EQ(r.ratio, 1.0);
}

TEST(ActivationRatios, OddGroup) {
  auto r = activation_ratios(single_group({1, 2, 3, 4, 5}));
  ASSERT_EQ(r.size(), 5u);
  const double expected[] = {1.0 / 3, 2.0 / 3, 1.0, 4.0 / 3, 5.0 / 3};
  for (std::size_t i = 0; i < 5; ++i) EXPECT_DOUBLE_EQ(r[i].ratio, expected[i]);
}

TEST(ActivationRatios, EvenGroupUsesMiddleMean) {
  auto r = activation_ratios(single_group({1, 2, 4, 8}));
  EXPECT_DOUBLE_EQ(r[3].ratio, 8.0 / 3.0);
}

TEST(ActivationRatios, ZeroMedianIsDegenerate) {
  try {
    activation_ratios(single_group({0, 0, 0}));
    FAIL();
  } catch (const DegenerateGroupError& e) {
    EXPECT_NE(std::string(e.what()).find("layer 0"), std::string::npos) << e.what();
  }
}

TEST(ActivationRatios, ScopeSelectsGroups) {
  ActivationLog log{"g", "m", {{0, 0, 0, 1, 1.0}, {0, 1, 0, 1, 3.0}}};
  auto per_head = activation_ratios(log, MedianScope::LayerHead);
  EXPECT_DOUBLE_EQ(per_head[0].ratio, 1.0);
  EXPECT_DOUBLE_EQ(per_head[1].ratio, 1.0);
  auto per_layer = activation_ratios(log, MedianScope::Layer);
  EXPECT_DOUBLE_EQ(per_layer[0].ratio, 0.5);
  EXPECT_DOUBLE_EQ(per_layer[1].ratio, 1.5);
}

TEST(ActivationRatios, RejectsBadLogs) {
  EXPECT_THROW(activation_ratios(single_group({1, -1})), ValidationError);
  EXPECT_THROW(activation_ratios(single_group({1, NAN})), ValidationError);
  ActivationLog dup{"g", "m", {{0, 0, 0, 1, 1.0}, {0, 0, 0, 1, 2.0}}};
  EXPECT_THROW(activation_ratios(dup), ValidationError);
}

TEST(PercentileCutoff, TopFiveOfHundred) {
  std::vector<double> v(100);
  std::iota(v.begin(), v.end(), 1.0);
  std::shuffle(v.begin(), v.end(), std::mt19937_64(3));
  EXPECT_DOUBLE_EQ(percentile_cutoff(v, 95.0), 96.0);
  EXPECT_THROW(percentile_cutoff({}, 95.0), ValidationError);
  EXPECT_THROW(percentile_cutoff(v, 100.0), ValidationError);
  EXPECT_THROW(percentile_cutoff(v, 0.0), ValidationError);
}

TEST(FlagMassive, HundredDistinctPairs) {
  std::vector<double> maxima(100);
  std::iota(maxima.begin(), maxima.end(), 1.0);
  std::vector<GraphRatios> ds{ratios_from_max("g", maxima)};
  auto reports = flag_massive(ds, 95.0);
  ASSERT_EQ(reports.size(), 1u);
  std::size_t flagged = 0;
  for (const auto& e : reports[0].entries) {
    flagged += e.flagged;
    EXPECT_EQ(e.flagged, e.max_ratio >= 96.0);
    EXPECT_EQ(e.argmax_layer, 1u);
  }
  EXPECT_EQ(flagged, 5u);
  EXPECT_DOUBLE_EQ(reports[0].cutoff, 96.0);
}

TEST(FlagMassive, TiesFlagEverything) {
  std::vector<GraphRatios> ds{ratios_from_max("g", std::vector<double>(20, 2.5))};
  auto reports = flag_massive(ds, 95.0);
  for (const auto& e : reports[0].entries) EXPECT_TRUE(e.flagged);
}

TEST(FlagMassive, DatasetVersusGraphScope) {
  std::vector<GraphRatios> ds{ratios_from_max("a", {1, 2, 3, 4}), ratios_from_max("b", {10, 20, 30, 40})};
  auto pooled = flag_massive(ds, 75.0, CutoffScope::Dataset);
  std::size_t flagged_a = 0;
  for (const auto& e : pooled[0].entries) flagged_a += e.flagged;
  EXPECT_EQ(flagged_a, 0u);
  auto local = flag_massive(ds, 75.0, CutoffScope::Graph);
  flagged_a = 0;
  for (const auto& e : local[0].entries) flagged_a += e.flagged;
  EXPECT_EQ(flagged_a, 1u);
}

TEST(FlagMassive, EntriesSortedByPair) {
  GraphRatios gr{"g", "m", {{0, 0, 3, 1, 2.0}, {0, 0, 0, 2, 1.0}, {0, 0, 0, 1, 5.0}}};
  auto rep = flag_massive(std::span(&gr, 1), 50.0)[0];
  ASSERT_EQ(rep.entries.size(), 3u);
  EXPECT_EQ(rep.entries[0].dst, 1u);
  EXPECT_EQ(rep.entries[1].dst, 2u);
  EXPECT_EQ(rep.entries[2].src, 3u);
}

TEST(HopLengths, Cases) {
  auto barbell = gen_barbell_graph(BarbellSpec{}, 0);
  MAReport rep{barbell.id(), "m", 95.0, 1.0, {}};
  rep.entries.push_back({0, 1, 9.0, 0, 0, true, {}, {}});
  rep.entries.push_back({1, 0, 9.0, 0, 0, true, {}, {}});
  rep.entries.push_back({0, 5, 9.0, 0, 0, true, {}, {}});
  rep.entries.push_back({2, 2, 9.0, 0, 0, true, {}, {}});
  rep.entries.push_back({2, 6, 0.1, 0, 0, false, {}, {}});
  std::vector<MAReport> reports{rep};
  std::vector<Graph> graphs{barbell};
  auto h = ma_hop_lengths(reports, graphs);
  EXPECT_EQ(h.by_hop.at(1), 2u);
  EXPECT_EQ(h.by_hop.at(3), 1u);
  EXPECT_EQ(h.by_hop.at(0), 1u);
  EXPECT_EQ(h.total(), 4u);
}

TEST(HopLengths, Unreachable) {
  auto g = testing::make_graph(4, {{0, 1}, {2, 3}});
  MAReport rep{"g", "m", 95.0, 1.0, {{0, 3, 2.0, 0, 0, true, {}, {}}}};
  std::vector<MAReport> reports{rep};
  std::vector<Graph> graphs{g};
  auto h = ma_hop_lengths(reports, graphs);
  EXPECT_EQ(h.unreachable, 1u);
  EXPECT_TRUE(h.by_hop.empty());
}

TEST(AnnotateReport, AddsHopAndCurvature) {
  auto barbell = gen_barbell_graph(BarbellSpec{}, 0);
  MAReport rep{barbell.id(), "m", 95.0, 1.0, {{3, 4, 2.0, 0, 0, true, {}, {}}, {0, 5, 1.0, 0, 0, false, {}, {}}}};
  annotate_report(rep, barbell);
  EXPECT_EQ(rep.entries[0].hop, std::optional<std::size_t>(1));
  EXPECT_EQ(rep.entries[0].bfc, std::optional<double>(-1.0));
  EXPECT_EQ(rep.entries[1].hop, std::optional<std::size_t>(3));
  EXPECT_FALSE(rep.entries[1].bfc.has_value());
  MAReport other{"other", "m", 95.0, 1.0, {}};
  EXPECT_THROW(annotate_report(other, barbell), ValidationError);
}

TEST(Entropy, Rows) {
  ActivationLog log{"g", "m", {}};
  log.records.push_back({0, 0, 0, 0, 1.0});
  log.records.push_back({0, 0, 0, 1, 0.0});
  for (NodeId d = 0; d < 4; ++d) log.records.push_back({0, 0, 1, d, 0.25});
  log.records.push_back({0, 0, 2, 0, 0.5});
  log.records.push_back({0, 0, 2, 1, 0.5});
  auto h = attention_entropy(log);
  ASSERT_EQ(h.size(), 3u);
  EXPECT_DOUBLE_EQ(h[0].entropy, 0.0);
  EXPECT_NEAR(h[1].entropy, std::log(4.0), 1e-15);
  EXPECT_NEAR(h[2].entropy, std::log(2.0), 1e-15);
}

TEST(EdgeMaFlags, EitherDirectionFlags) {
  MAReport rep{"g", "m", 95.0, 1.0, {{1, 0, 5.0, 0, 0, true, {}, {}}, {1, 2, 0.5, 0, 0, false, {}, {}}}};
  std::vector<Edge> edges{{0, 1}, {1, 2}, {2, 3}};
  EXPECT_EQ(edge_ma_flags(rep, edges), (std::vector<bool>{true, false, false}));
  EXPECT_THROW(edge_ma_flags(rep, edges, MissingPairPolicy::Error), ValidationError);
}

TEST(ActivationIo, LogAndReportRoundTrip) {
  ActivationLog log{"g", "gt", {{0, 1, 0, 1, 0.25}, {2, 0, 1, 0, 0.75}}};
  auto back = log_from_json(log_to_json(log));
  EXPECT_EQ(log_to_json(back).dump(), log_to_json(log).dump());

  MAReport rep{"g", "gt", 95.0, 2.0,
               {{0, 1, 3.0, 1, 0, true, std::size_t{1}, -1.0}, {0, 2, 0.5, 0, 0, false, kUnreachable, {}}}};
  auto j = report_to_json(rep);
  EXPECT_TRUE(j["entries"][1]["hop"].is_null());
  EXPECT_TRUE(j["entries"][1]["bfc"].is_null());
  auto back_rep = report_from_json(j);
  EXPECT_EQ(back_rep.entries[1].hop, std::optional<std::size_t>(kUnreachable));
  EXPECT_EQ(report_to_json(back_rep).dump(), j.dump());
}

TEST(ActivationIo, RejectsMalformedRecords) {
  auto j = nlohmann::ordered_json::parse(R"({"graph_id":"g","records":[{"layer":0,"src":0,"dst":1,"weight":"x"}]})");
  EXPECT_THROW(log_from_json(j), ValidationError);
  auto k = nlohmann::ordered_json::parse(R"({"graph_id":"g","records":[{"layer":-1,"src":0,"dst":1,"weight":1}]})");
  EXPECT_THROW(log_from_json(k), ValidationError);
}

}  // namespace
}  // namespace curveprobe
