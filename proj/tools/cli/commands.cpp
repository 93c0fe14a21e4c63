#include "cli/commands.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <ostream>
#include <unordered_map>

#include "curveprobe/activation_io.hpp"
#include "curveprobe/collapse.hpp"
#include "curveprobe/curvature.hpp"
#include "curveprobe/errors.hpp"
#include "curveprobe/graph_io.hpp"
#include "curveprobe/parallel.hpp"
#include "curveprobe/pruning.hpp"
#include "curveprobe/records_io.hpp"
#include "curveprobe/spectral.hpp"
#include "curveprobe/stats.hpp"
#include "curveprobe/synth.hpp"

namespace curveprobe::cli {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

fs::path output_dir(const fs::path& out) {
  return out.has_parent_path() ? out.parent_path() : fs::path(".");
}

std::string jsonl(const std::vector<json>& rows) {
  std::string s;
  for (const auto& r : rows) {
    s += r.dump();
    s += '\n';
  }
  return s;
}

void finish(Context& ctx, const fs::path& dir, std::vector<fs::path> inputs) {
  ctx.manifest.inputs = std::move(inputs);
  write_manifest(dir, ctx.manifest);
}

std::unordered_map<std::string, const Graph*> index_graphs(const std::vector<Graph>& graphs) {
  std::unordered_map<std::string, const Graph*> by_id;
  for (const auto& g : graphs) {
    if (!by_id.emplace(g.id(), &g).second) throw ValidationError("duplicate graph_id '" + g.id() + "'");
  }
  return by_id;
}

const Graph& lookup(const std::unordered_map<std::string, const Graph*>& by_id, const std::string& id,
                    const std::string& what) {
  auto it = by_id.find(id);
  if (it == by_id.end()) throw ValidationError(what + " references unknown graph '" + id + "'");
  return *it->second;
}

MedianScope parse_median_scope(const std::string& s) {
  if (s == "layer") return MedianScope::Layer;
  if (s == "layer_head") return MedianScope::LayerHead;
  throw ValidationError("unknown median scope '" + s + "'");
}

SpectralOptions spectral_options(const std::string& laplacian, bool all_components) {
  SpectralOptions so;
  if (laplacian == "normalized") {
    so.laplacian = LaplacianKind::Normalized;
  } else if (laplacian == "unnormalized") {
    so.laplacian = LaplacianKind::Unnormalized;
  } else {
    throw ValidationError("unknown laplacian '" + laplacian + "'");
  }
  so.largest_component = !all_components;
  return so;
}

std::vector<GraphRatios> compute_ratios(const std::vector<ActivationLog>& logs, MedianScope scope,
                                        std::size_t jobs) {
  std::vector<GraphRatios> ratios(logs.size());
  parallel_for(logs.size(), jobs, [&](std::size_t k) {
    ratios[k] = GraphRatios{logs[k].graph_id, logs[k].model, activation_ratios(logs[k], scope)};
  });
  return ratios;
}

}  // namespace

void run_curvature(Context& ctx, const CurvatureOptions& o) {
  const auto graphs = load_graphs(o.graphs);
  std::vector<GraphCurvature> curv(graphs.size());
  parallel_for(graphs.size(), ctx.jobs, [&](std::size_t k) { curv[k] = graph_curvature(graphs[k]); });

  std::vector<json> rows;
  CsvTable csv({"graph_id", "i", "j", "bfc"});
  for (const auto& gc : curv) {
    rows.push_back(curvature_record_to_json(gc));
    for (std::size_t e = 0; e < gc.edges.size(); ++e) {
      csv.add_row({gc.graph_id, gc.edges[e].u, gc.edges[e].v, gc.bfc[e]});
    }
  }
  write_atomic(o.out, jsonl(rows));
  write_atomic(sibling(o.out, ".csv"), csv.str());
  finish(ctx, output_dir(o.out), {o.graphs});
  *ctx.out << "curvature: " << curv.size() << " graphs -> " << o.out << "\n";
}

void run_ma(Context& ctx, const MaOptions& o) {
  const auto graphs = load_graphs(o.graphs);
  const auto by_id = index_graphs(graphs);
  const auto logs = load_logs(o.logs);
  for (const auto& log : logs) (void)lookup(by_id, log.graph_id, "activation log");

  const auto ratios = compute_ratios(logs, parse_median_scope(o.median_scope), ctx.jobs);
  if (o.cutoff_scope != "dataset" && o.cutoff_scope != "graph") {
    throw ValidationError("unknown cutoff scope '" + o.cutoff_scope + "'");
  }
  auto reports = flag_massive(ratios, o.percentile,
                              o.cutoff_scope == "graph" ? CutoffScope::Graph : CutoffScope::Dataset);
  parallel_for(reports.size(), ctx.jobs, [&](std::size_t k) {
    annotate_report(reports[k], lookup(by_id, reports[k].graph_id, "MA report"));
  });
  const auto hops = ma_hop_lengths(reports, graphs);

  std::vector<json> rows;
  CsvTable csv({"graph_id", "src", "dst", "max_ratio", "argmax_layer", "argmax_head", "flagged", "hop", "bfc"});
  std::size_t flagged = 0;
  for (const auto& rep : reports) {
    rows.push_back(report_to_json(rep));
    for (const auto& e : rep.entries) {
      flagged += e.flagged;
      json hop = e.hop && *e.hop != kUnreachable ? json(*e.hop) : json("unreachable");
      csv.add_row({rep.graph_id, e.src, e.dst, e.max_ratio, e.argmax_layer, e.argmax_head, e.flagged, hop,
                   e.bfc ? json(*e.bfc) : json(nullptr)});
    }
  }
  const fs::path out(o.out);
  fs::path hops_path = out.parent_path() / (out.stem().string() + "_hops.json");
  CsvTable hops_csv({"hop", "count"});
  for (const auto& [hop, count] : hops.by_hop) hops_csv.add_row({hop, count});
  hops_csv.add_row({"unreachable", hops.unreachable});

  write_atomic(out, jsonl(rows));
  write_atomic(sibling(out, ".csv"), csv.str());
  write_atomic(hops_path, hop_histogram_to_json(hops).dump(2) + "\n");
  write_atomic(sibling(hops_path, ".csv"), hops_csv.str());
  finish(ctx, output_dir(out), {o.logs, o.graphs});
  *ctx.out << "ma: " << flagged << " flagged pairs across " << reports.size() << " graphs -> " << o.out << "\n";
}

void run_enrich(Context& ctx, const EnrichOptions& o) {
  const auto reports = load_reports(o.ma);
  const auto curv = load_curvature(o.bfc);
  std::unordered_map<std::string, const GraphCurvature*> curv_by_id;
  for (const auto& gc : curv) curv_by_id.emplace(gc.graph_id, &gc);

  Binning binning;
  if (o.binning == "exact") {
    binning = Binning::exact();
  } else if (o.binning == "width") {
    binning = Binning::of_width(o.bin_width);
  } else {
    throw ValidationError("unknown binning '" + o.binning + "'");
  }

  std::vector<double> pooled_bfc;
  std::vector<bool> pooled_flags;
  std::unordered_map<std::string, std::size_t> offset;
  for (const auto& rep : reports) {
    auto it = curv_by_id.find(rep.graph_id);
    if (it == curv_by_id.end()) {
      throw ValidationError("MA report for graph '" + rep.graph_id + "' has no curvature record");
    }
    const GraphCurvature& gc = *it->second;
    offset[rep.graph_id] = pooled_bfc.size();
    const auto flags = edge_ma_flags(rep, gc.edges);
    pooled_bfc.insert(pooled_bfc.end(), gc.bfc.begin(), gc.bfc.end());
    pooled_flags.insert(pooled_flags.end(), flags.begin(), flags.end());
  }
  const auto table = enrichment(pooled_bfc, pooled_flags, binning);
  json doc = enrichment_to_json(table);
  doc["counts"]["graphs_without_ma_report"] = curv.size() - offset.size();

  std::vector<fs::path> inputs{o.ma, o.bfc};
  if (!o.logs.empty()) {
    inputs.emplace_back(o.logs);
    const auto logs = load_logs(o.logs);
    const auto ratios = compute_ratios(logs, parse_median_scope(o.median_scope), ctx.jobs);

    std::vector<std::vector<std::optional<double>>> per_edge(pooled_bfc.size());
    std::vector<double> entropy_x, entropy_y;
    std::map<std::int64_t, std::pair<double, std::pair<double, std::size_t>>> entropy_bins;
    for (std::size_t k = 0; k < logs.size(); ++k) {
      auto off = offset.find(logs[k].graph_id);
      if (off == offset.end()) continue;  // graph outside the MA analysis
      const GraphCurvature& gc = *curv_by_id.at(logs[k].graph_id);
      auto layers = edge_layer_ratios(ratios[k], gc.edges);
      for (std::size_t e = 0; e < layers.size(); ++e) per_edge[off->second + e] = std::move(layers[e]);

      NodeId max_node = 0;
      for (const auto& e : gc.edges) max_node = std::max({max_node, e.u, e.v});
      GraphData gd;
      gd.graph_id = gc.graph_id;
      gd.num_nodes = gc.edges.empty() ? 0 : static_cast<std::size_t>(max_node) + 1;
      gd.edges = gc.edges;
      const auto node_curv = node_min_curvature(Graph(std::move(gd)), gc.bfc);
      for (const auto& row : attention_entropy(logs[k])) {
        if (row.src >= node_curv.size() || !node_curv[row.src]) continue;
        const double c = *node_curv[row.src];
        entropy_x.push_back(c);
        entropy_y.push_back(row.entropy);
        auto [bin, inserted] = entropy_bins.try_emplace(binning.key(c), c, std::pair(0.0, std::size_t{0}));
        bin->second.first = std::min(bin->second.first, c);
        bin->second.second.first += row.entropy;
        ++bin->second.second.second;
      }
    }
    doc["layer_evolution"] = layer_evolution_to_json(layer_evolution(per_edge, pooled_flags, pooled_bfc, binning));

    json ent = json::object();
    json bins = json::array();
    for (const auto& [key, v] : entropy_bins) {
      bins.push_back(json{{"curvature", v.first},
                          {"rows", v.second.second},
                          {"mean_entropy", v.second.first / static_cast<double>(v.second.second)}});
    }
    ent["bins"] = std::move(bins);
    try {
      const auto c = correlate(entropy_x, entropy_y);
      ent["correlation"] = json{{"pearson_r", c.pearson_r}, {"slope", c.slope}, {"intercept", c.intercept}};
    } catch (const ValidationError& e) {
      ent["correlation"] = nullptr;
      ent["correlation_note"] = e.what();
    }
    doc["entropy_vs_curvature"] = std::move(ent);
  }

  CsvTable csv({"curvature", "edges", "ma_edges", "base_prob", "ma_prob", "enrichment"});
  for (const auto& e : table.entries) {
    csv.add_row({e.curvature, e.edges, e.ma_edges, e.base_prob, e.ma_prob,
                 e.enrichment ? json(*e.enrichment) : json(nullptr)});
  }
  write_atomic(o.out, doc.dump(2) + "\n");
  write_atomic(sibling(o.out, ".csv"), csv.str());
  finish(ctx, output_dir(o.out), inputs);
  if (table.no_ma_warning) *ctx.out << "enrich: warning: no massively activated structural edges\n";
  *ctx.out << "enrich: " << table.entries.size() << " curvature values -> " << o.out << "\n";
}

void run_collapse(Context& ctx, const CollapseOptions& o) {
  const auto graphs = load_graphs(o.graphs);
  const auto by_id = index_graphs(graphs);
  const auto logs = load_logs(o.logs);
  ActivationGraphOptions ao;
  ao.theta = o.theta;
  ao.structural_only = o.structural_only;
  ao.median_scope = parse_median_scope(o.median_scope);
  if (o.agg == "mean") {
    ao.aggregation = Aggregation::Mean;
  } else if (o.agg == "max") {
    ao.aggregation = Aggregation::Max;
  } else {
    throw ValidationError("unknown aggregation '" + o.agg + "'");
  }
  const auto so = spectral_options(o.laplacian, o.all_components);
  for (const auto& log : logs) (void)lookup(by_id, log.graph_id, "activation log");

  std::vector<CollapseReport> reports(logs.size());
  parallel_for(logs.size(), ctx.jobs, [&](std::size_t k) {
    const Graph& g = lookup(by_id, logs[k].graph_id, "activation log");
    reports[k] = curvature_shift(g, build_activation_graph(g, logs[k], ao), so);
  });

  std::vector<json> rows;
  CsvTable csv({"graph_id", "static_negative_fraction", "activation_negative_fraction", "static_weighted_bfc",
                "activation_weighted_bfc", "static_spectral_gap", "activation_spectral_gap"});
  double s_w = 0, s_sum = 0, s_neg = 0, a_w = 0, a_sum = 0, a_neg = 0, s_gap = 0, a_gap = 0;
  for (const auto& r : reports) {
    rows.push_back(collapse_to_json(r));
    csv.add_row({r.graph_id, r.static_negative_fraction, r.activation_negative_fraction,
                 r.static_summary.weighted_mean, r.activation_summary.weighted_mean, r.static_spectral_gap,
                 r.activation_spectral_gap});
    auto pool = [](const CurvatureSummary& s, double& w, double& sum, double& neg) {
      for (std::size_t e = 0; e < s.per_edge.size(); ++e) {
        w += s.weights_used[e];
        sum += s.weights_used[e] * s.per_edge[e].bfc;
        if (s.per_edge[e].bfc < 0.0) neg += s.weights_used[e];
      }
    };
    pool(r.static_summary, s_w, s_sum, s_neg);
    pool(r.activation_summary, a_w, a_sum, a_neg);
    s_gap += r.static_spectral_gap;
    a_gap += r.activation_spectral_gap;
  }
  json aggregate = json::object();
  aggregate["graphs"] = reports.size();
  const double n = static_cast<double>(reports.size());
  auto ratio = [](double a, double b) { return b > 0 ? json(a / b) : json(nullptr); };
  aggregate["static_weighted_bfc"] = ratio(s_sum, s_w);
  aggregate["activation_weighted_bfc"] = ratio(a_sum, a_w);
  aggregate["static_negative_fraction"] = ratio(s_neg, s_w);
  aggregate["activation_negative_fraction"] = ratio(a_neg, a_w);
  aggregate["mean_static_spectral_gap"] = ratio(s_gap, n);
  aggregate["mean_activation_spectral_gap"] = ratio(a_gap, n);

  const fs::path out(o.out);
  write_atomic(out, jsonl(rows));
  write_atomic(sibling(out, ".csv"), csv.str());
  write_atomic(out.parent_path() / (out.stem().string() + "_summary.json"), aggregate.dump(2) + "\n");
  finish(ctx, output_dir(out), {o.graphs, o.logs});
  *ctx.out << "collapse: " << reports.size() << " graphs -> " << o.out << "\n";
}

void run_spectral(Context& ctx, const SpectralOptionsCli& o) {
  const auto graphs = load_graphs(o.graphs);
  const auto so = spectral_options(o.laplacian, o.all_components);
  std::vector<double> gaps(graphs.size());
  parallel_for(graphs.size(), ctx.jobs, [&](std::size_t k) {
    if (graphs[k].num_edges() == 0) throw ValidationError("graph '" + graphs[k].id() + "' has no edges");
    gaps[k] = spectral_gap(graphs[k].edges(), graphs[k].num_nodes(), so);
  });
  std::vector<json> rows;
  CsvTable csv({"graph_id", "spectral_gap"});
  for (std::size_t k = 0; k < graphs.size(); ++k) {
    rows.push_back(json{{"graph_id", graphs[k].id()}, {"spectral_gap", gaps[k]}});
    csv.add_row({graphs[k].id(), gaps[k]});
  }
  write_atomic(o.out, jsonl(rows));
  write_atomic(sibling(o.out, ".csv"), csv.str());
  finish(ctx, output_dir(o.out), {o.graphs});
  *ctx.out << "spectral: " << graphs.size() << " graphs -> " << o.out << "\n";
}

void run_prune(Context& ctx, const PruneOptions& o) {
  const auto graphs = load_graphs(o.graphs);
  (void)index_graphs(graphs);
  const auto reports = load_reports(o.ma);
  const auto curv = load_curvature(o.bfc);
  const PruneTarget target = parse_prune_target(o.set);
  const auto sets = categorize(reports, curv);
  const auto pruned = emit_pruned(graphs, sets, target);

  CsvTable csv({"set", "graph_id", "i", "j"});
  auto add = [&](const char* name, const std::vector<EdgeRef>& refs) {
    for (const auto& r : refs) csv.add_row({name, r.graph_id, r.endpoints.u, r.endpoints.v});
  };
  add("A", sets.set_a);
  add("B", sets.set_b);
  add("C", sets.set_c);
  add("unflagged_positive", sets.unflagged_positive);
  add("excluded_zero", sets.excluded_zero);

  const fs::path out(o.out);
  const fs::path sets_path = out.parent_path() / (out.stem().string() + "_sets.json");
  write_atomic(out, dump_graphs(pruned));
  write_atomic(sets_path, pruning_sets_to_json(sets).dump(2) + "\n");
  write_atomic(sibling(sets_path, ".csv"), csv.str());
  finish(ctx, output_dir(out), {o.graphs, o.ma, o.bfc});
  *ctx.out << "prune: removed " << target_set(sets, target).size() << " edges (set " << prune_tag(target)
           << ") -> " << o.out << "\n";
}

void run_delta_loss(Context& ctx, const DeltaLossOptions& o) {
  const EvalReport baseline = load_eval_report(o.baseline);
  std::vector<EvalReport> variants;
  std::vector<fs::path> inputs{o.baseline};
  for (const auto& p : o.variants) {
    variants.push_back(load_eval_report(p));
    inputs.emplace_back(p);
  }
  const auto table = delta_loss(baseline, variants);
  CsvTable csv({"variant", "loss", "delta", "relative_error_pct"});
  for (const auto& r : table.rows) {
    csv.add_row({variant_name(r.variant), r.loss, r.delta,
                 r.relative_error_pct ? json(*r.relative_error_pct) : json(nullptr)});
  }
  write_atomic(o.out, delta_table_to_json(table).dump(2) + "\n");
  write_atomic(sibling(o.out, ".csv"), csv.str());
  finish(ctx, output_dir(o.out), inputs);
  for (const auto& w : table.warnings) *ctx.out << "delta-loss: warning: " << w << "\n";
  *ctx.out << "delta-loss: " << table.rows.size() << " variants -> " << o.out << "\n";
}

void run_gen_barbell(Context& ctx, const GenBarbellOptions& o) {
  BarbellSpec spec;
  spec.clique_size = o.clique_size;
  spec.num_dummy_cliques = dummy_cliques_for(o.variant);
  spec.feature_dim = o.feature_dim;
  spec.seed = ctx.seed;
  if (o.mode == "topological") {
    spec.feature_mode = FeatureMode::Topological;
  } else if (o.mode == "permuted") {
    spec.feature_mode = FeatureMode::Permuted;
  } else {
    throw ValidationError("unknown feature mode '" + o.mode + "'");
  }
  if (o.dummy_attach == "target") {
    spec.dummy_attach = DummyAttach::TargetNode;
  } else if (o.dummy_attach == "clique") {
    spec.dummy_attach = DummyAttach::TargetClique;
  } else {
    throw ValidationError("unknown dummy attachment '" + o.dummy_attach + "'");
  }
  validate_spec(spec);

  BarbellSpec train = spec, test = spec;
  train.split = Split::Train;
  train.num_graphs = o.n_train;
  test.split = Split::Test;
  test.num_graphs = o.n_test;
  const auto train_graphs = gen_barbell(train);
  const auto test_graphs = gen_barbell(test);

  const fs::path dir(o.out_dir);
  write_atomic(dir / "train.jsonl", dump_graphs(train_graphs));
  write_atomic(dir / "test.jsonl", dump_graphs(test_graphs));
  finish(ctx, dir, {});
  *ctx.out << "gen-barbell: " << train_graphs.size() << " train, " << test_graphs.size() << " test -> "
           << dir.string() << "\n";
}

void run_report(Context& ctx, const ReportOptions& o) {
  const fs::path dir(o.dir);
  if (!fs::is_directory(dir)) throw ValidationError("report directory not found: " + dir.string());
  const fs::path out = o.out.empty() ? dir / "report.json" : fs::path(o.out);

  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const auto ext = entry.path().extension();
    if (ext != ".json" && ext != ".jsonl") continue;
    if (entry.path().filename() == "manifest.json") continue;
    files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());

  std::map<std::string, json> per_graph;
  auto slot = [&](const std::string& id) -> json& {
    auto& g = per_graph[id];
    if (g.is_null()) g = json{{"graph_id", id}};
    return g;
  };
  json tables = json::object();
  std::vector<fs::path> used;
  for (const auto& path : files) {
    if (fs::exists(out) && fs::equivalent(path, out)) continue;
    std::vector<json> rows;
    try {
      if (path.extension() == ".jsonl") {
        rows = read_json_lines(path);
      } else {
        std::ifstream in(path);
        rows.push_back(json::parse(in));
      }
    } catch (const std::exception&) {
      continue;  // not one of ours
    }
    bool recognised = false;
    for (const auto& r : rows) {
      if (!r.is_object()) continue;
      if (r.contains("graph_id") && r.contains("bfc") && r.contains("edges") && r.contains("weighted_mean")) {
        slot(r["graph_id"].get<std::string>())["curvature"] =
            json{{"edges", r["edges"].size()},
                 {"weighted_mean", r["weighted_mean"]},
                 {"negative_fraction", r["negative_fraction"]}};
        recognised = true;
      } else if (r.contains("graph_id") && r.contains("entries") && r.contains("threshold_percentile")) {
        std::size_t flagged = 0;
        for (const auto& e : r["entries"]) flagged += e.value("flagged", false);
        slot(r["graph_id"].get<std::string>())["ma"] = json{{"pairs", r["entries"].size()},
                                                            {"flagged", flagged},
                                                            {"cutoff", r["cutoff"]},
                                                            {"threshold_percentile", r["threshold_percentile"]}};
        recognised = true;
      } else if (r.contains("graph_id") && r.contains("static_negative_fraction")) {
        json c = r;
        c.erase("graph_id");
        c.erase("static_summary");
        c.erase("activation_summary");
        slot(r["graph_id"].get<std::string>())["collapse"] = std::move(c);
        recognised = true;
      } else if (r.contains("entries") && r.contains("counts")) {
        tables["enrichment"] = r;
        recognised = true;
      } else if (r.contains("rows") && r.contains("baseline_loss")) {
        tables["delta_loss"] = r;
        recognised = true;
      } else if (r.contains("by_hop") && r.contains("unreachable")) {
        tables["ma_hops"] = r;
        recognised = true;
      } else if (r.contains("mean_static_spectral_gap")) {
        tables["collapse_summary"] = r;
        recognised = true;
      }
    }
    if (recognised) used.push_back(path);
  }
  if (used.empty()) throw ValidationError("no curveprobe outputs found in " + dir.string());

  json graphs = json::array();
  CsvTable csv({"graph_id", "edges", "weighted_bfc", "negative_fraction", "ma_pairs", "ma_flagged",
                "activation_negative_fraction", "static_spectral_gap", "activation_spectral_gap"});
  auto field = [](const json& g, const char* section, const char* key) {
    return g.contains(section) && g[section].contains(key) ? g[section][key] : json(nullptr);
  };
  for (auto& [id, g] : per_graph) {
    csv.add_row({id, field(g, "curvature", "edges"), field(g, "curvature", "weighted_mean"),
                 field(g, "curvature", "negative_fraction"), field(g, "ma", "pairs"), field(g, "ma", "flagged"),
                 field(g, "collapse", "activation_negative_fraction"), field(g, "collapse", "static_spectral_gap"),
                 field(g, "collapse", "activation_spectral_gap")});
    graphs.push_back(std::move(g));
  }
  json sources = json::array();
  for (const auto& p : used) sources.push_back(p.filename().string());
  json doc{{"sources", std::move(sources)}, {"graphs", std::move(graphs)}, {"tables", std::move(tables)}};

  write_atomic(out, doc.dump(2) + "\n");
  write_atomic(sibling(out, ".csv"), csv.str());
  finish(ctx, output_dir(out), used);
  *ctx.out << "report: joined " << used.size() << " files -> " << out.string() << "\n";
}

}  // namespace curveprobe::cli
