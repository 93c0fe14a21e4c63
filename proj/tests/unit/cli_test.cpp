#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "cli/cli.hpp"
#include "curveprobe/activation_io.hpp"
#include "curveprobe/graph_io.hpp"
#include "fixtures.hpp"

namespace curveprobe {
namespace {

using nlohmann::json;
using testing::TempDir;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result cli(std::vector<std::string> args) {
  args.insert(args.begin(), "curveprobe");
  std::ostringstream out, err;
  int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<json> read_lines(const std::filesystem::path& p) {
  std::vector<json> out;
  std::ifstream in(p);
  for (std::string line; std::getline(in, line);)
    if (!line.empty()) out.push_back(json::parse(line));
  return out;
}

// Uniform attention over each node's closed neighbourhood, with one loud pair per graph.
void write_logs(const std::filesystem::path& graphs, const std::filesystem::path& logs) {
  std::ofstream out(logs);
  for (const auto& g : load_graphs(graphs)) {
    ActivationLog log{g.id(), "toy", {}};
    for (std::uint32_t layer = 0; layer < 2; ++layer) {
      for (NodeId s = 0; s < g.num_nodes(); ++s) {
        log.records.push_back({layer, 0, s, s, 0.25});
        for (NodeId d : g.neighbors(s)) {
          const bool loud = (s == 3 && d == 4) || (s == 4 && d == 3);
          log.records.push_back({layer, 0, s, d, loud ? 4.0 : 0.25 + 0.001 * d});
        }
      }
    }
    out << log_to_json(log).dump() << "\n";
  }
}

TEST(Cli, UsageErrors) {
  auto none = cli({});
  EXPECT_EQ(none.code, 64);
  EXPECT_NE(none.err.find("Usage"), std::string::npos);
  auto unknown = cli({"curvature", "--graphs", "a", "--out", "b", "--bogus"});
  EXPECT_EQ(unknown.code, 64);
  EXPECT_NE(unknown.err.find("--bogus"), std::string::npos);
  EXPECT_EQ(cli({"ma", "--logs", "x"}).code, 64);
  EXPECT_EQ(cli({"prune", "--graphs", "g", "--ma", "m", "--bfc", "b", "--out", "o", "--set", "D"}).code, 64);
}

TEST(Cli, VersionAndHelp) {
  auto v = cli({"--version"});
  EXPECT_EQ(v.code, 0);
  EXPECT_NE(v.out.find("0.3.0"), std::string::npos);
  auto h = cli({"curvature", "--help"});
  EXPECT_EQ(h.code, 0);
  EXPECT_NE(h.out.find("--graphs"), std::string::npos);
}

TEST(Cli, MissingInputNamesPath) {
  TempDir dir;
  auto r = cli({"curvature", "--graphs", (dir / "nope.jsonl").string(), "--out", (dir / "bfc.jsonl").string()});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("nope.jsonl"), std::string::npos) << r.err;
}

TEST(Cli, InvalidGraphIsValidationError) {
  TempDir dir;
  testing::write_text(dir / "g.jsonl", R"({"graph_id":"x","num_nodes":2,"edges":[[0,3]]})" "\n");
  auto r = cli({"curvature", "--graphs", (dir / "g.jsonl").string(), "--out", (dir / "o.jsonl").string()});
  EXPECT_EQ(r.code, 1);
  EXPECT_FALSE(std::filesystem::exists(dir / "o.jsonl"));
}

TEST(Cli, OversizedSpectralIsCapabilityError) {
  TempDir dir;
  json g{{"graph_id", "long"}, {"num_nodes", 2100}, {"edges", json::array()}};
  for (int i = 0; i + 1 < 2100; ++i) g["edges"].push_back({i, i + 1});
  testing::write_text(dir / "g.jsonl", g.dump() + "\n");
  auto r = cli({"spectral", "--graphs", (dir / "g.jsonl").string(), "--out", (dir / "gaps.jsonl").string()});
  EXPECT_EQ(r.code, 2) << r.err;
}

TEST(Cli, CurvatureWritesTablesAndManifest) {
  TempDir dir;
  ASSERT_EQ(cli({"gen-barbell", "--n-train", "3", "--n-test", "1", "--out-dir", (dir / "data").string()}).code, 0);
  auto r = cli({"curvature", "--graphs", (dir / "data/train.jsonl").string(), "--out",
                (dir / "out/bfc.jsonl").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  auto lines = read_lines(dir / "out/bfc.jsonl");
  ASSERT_EQ(lines.size(), 3u);
  EXPECT_EQ(lines[0]["graph_id"], "barbell-train-0000");
  std::size_t negatives = 0;
  for (double b : lines[0]["bfc"]) negatives += b < 0;
  EXPECT_EQ(negatives, 1u);
  EXPECT_TRUE(std::filesystem::exists(dir / "out/bfc.csv"));
  auto manifest = json::parse(testing::read_text(dir / "out/manifest.json"));
  EXPECT_EQ(manifest["tool_version"], "0.3.0");
  EXPECT_EQ(manifest["inputs"][0]["sha256"].get<std::string>().size(), 64u);
  EXPECT_EQ(manifest["config"]["curvature"]["graphs"], (dir / "data/train.jsonl").string());
  EXPECT_TRUE(manifest.contains("timestamp"));
}

TEST(Cli, OutputsAreDeterministic) {
  TempDir dir;
  for (const char* sub : {"a", "b"}) {
    const auto d = dir / sub;
    ASSERT_EQ(cli({"--seed", "11", "gen-barbell", "--variant", "extended", "--n-train", "4", "--n-test", "2",
                   "--out-dir", (d / "data").string()})
                  .code,
              0);
    ASSERT_EQ(cli({"curvature", "--graphs", (d / "data/train.jsonl").string(), "--out", (d / "bfc.jsonl").string(),
                   "--jobs", "3"})
                  .code,
              0);
  }
  for (const char* f : {"data/train.jsonl", "data/test.jsonl", "bfc.jsonl", "bfc.csv"}) {
    EXPECT_EQ(testing::read_text(dir / "a" / f), testing::read_text(dir / "b" / f)) << f;
  }
}

TEST(Cli, ConfigFileFillsMissingFlags) {
  TempDir dir;
  testing::write_text(dir / "cfg.json",
                      R"({"seed": 5, "gen-barbell": {"n_train": 2, "n_test": 1, "variant": "modified"}})");
  auto r = cli({"gen-barbell", "--config", (dir / "cfg.json").string(), "--n-test", "3", "--out-dir",
                (dir / "data").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(read_lines(dir / "data/train.jsonl").size(), 2u);
  auto test = read_lines(dir / "data/test.jsonl");
  EXPECT_EQ(test.size(), 3u);
  EXPECT_EQ(test[0]["num_nodes"], 12);
  auto manifest = json::parse(testing::read_text(dir / "data/manifest.json"));
  EXPECT_EQ(manifest["config"]["seed"], "5");

  testing::write_text(dir / "bad.json", R"({"gen-barbell": {"cliques": 9}})");
  EXPECT_EQ(cli({"gen-barbell", "--config", (dir / "bad.json").string(), "--out-dir", (dir / "x").string()}).code,
            1);
  testing::write_text(dir / "broken.json", "{");
  EXPECT_EQ(cli({"gen-barbell", "--config", (dir / "broken.json").string(), "--out-dir", (dir / "x").string()}).code,
            1);
}

TEST(Cli, PipelineAndReport) {
  TempDir dir;
  const auto data = dir / "data";
  const auto out = dir / "out";
  ASSERT_EQ(cli({"gen-barbell", "--n-train", "6", "--n-test", "1", "--out-dir", data.string()}).code, 0);
  const auto graphs = (data / "train.jsonl").string();
  write_logs(data / "train.jsonl", dir / "logs.jsonl");
  const auto logs = (dir / "logs.jsonl").string();

  auto run_ok = [](std::vector<std::string> args) {
    auto r = cli(std::move(args));
    EXPECT_EQ(r.code, 0) << r.err;
  };
  run_ok({"curvature", "--graphs", graphs, "--out", (out / "bfc.jsonl").string()});
  run_ok({"ma", "--logs", logs, "--graphs", graphs, "--out", (out / "ma.jsonl").string()});
  run_ok({"enrich", "--ma", (out / "ma.jsonl").string(), "--bfc", (out / "bfc.jsonl").string(), "--out",
          (out / "enrich.json").string(), "--logs", logs});
  run_ok({"collapse", "--graphs", graphs, "--logs", logs, "--out", (out / "collapse.jsonl").string(), "--theta",
          "2.0"});
  run_ok({"prune", "--graphs", graphs, "--ma", (out / "ma.jsonl").string(), "--bfc", (out / "bfc.jsonl").string(),
          "--set", "A", "--out", (dir / "pruned/train_A.jsonl").string()});

  auto ma = read_lines(out / "ma.jsonl");
  ASSERT_EQ(ma.size(), 6u);
  for (const auto& e : ma[0]["entries"]) {
    const bool bridge = (e["src"] == 3 && e["dst"] == 4) || (e["src"] == 4 && e["dst"] == 3);
    EXPECT_EQ(e["flagged"].get<bool>(), bridge);
  }

  auto enrich = json::parse(testing::read_text(out / "enrich.json"));
  EXPECT_DOUBLE_EQ(enrich["entries"][0]["curvature"].get<double>(), -1.0);
  EXPECT_DOUBLE_EQ(enrich["entries"][0]["enrichment"].get<double>(), 13.0);
  EXPECT_TRUE(enrich.contains("layer_evolution"));
  EXPECT_EQ(enrich["counts"]["graphs_without_ma_report"], 0);

  auto pruned = load_graphs(dir / "pruned/train_A.jsonl");
  ASSERT_EQ(pruned.size(), 6u);
  EXPECT_EQ(pruned[0].num_edges(), 12u);
  EXPECT_EQ(hop_distance(pruned[0], 0, 5), kUnreachable);

  testing::write_text(dir / "base.json", R"({"variant":"baseline","loss":0.51})");
  testing::write_text(dir / "a.json", R"({"variant":"prune_A","loss":0.6224})");
  run_ok({"delta-loss", "--baseline", (dir / "base.json").string(), "--variants", (dir / "a.json").string(),
          "--out", (out / "delta.json").string()});
  auto delta = json::parse(testing::read_text(out / "delta.json"));
  EXPECT_EQ(delta["rows"][0]["delta"].get<double>(), 0.1124);

  run_ok({"report", "--dir", out.string()});
  auto report = json::parse(testing::read_text(out / "report.json"));
  ASSERT_EQ(report["graphs"].size(), 6u);
  const auto& first = report["graphs"][0];
  EXPECT_EQ(first["graph_id"], "barbell-train-0000");
  EXPECT_TRUE(first.contains("curvature"));
  EXPECT_TRUE(first.contains("ma"));
  EXPECT_TRUE(first.contains("collapse"));
  EXPECT_TRUE(std::filesystem::exists(out / "report.csv"));
}

}  // namespace
}  // namespace curveprobe
