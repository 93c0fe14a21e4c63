#include "curveprobe/records_io.hpp"

#include <cmath>
#include <fstream>

#include "curveprobe/errors.hpp"
#include "curveprobe/graph_io.hpp"

namespace curveprobe {

namespace {

ordered_json optional_number(const std::optional<double>& x) {
  return x && std::isfinite(*x) ? ordered_json(*x) : ordered_json(nullptr);
}

ordered_json edges_to_json(std::span<const Edge> edges) {
  ordered_json arr = ordered_json::array();
  for (const auto& e : edges) arr.push_back(ordered_json::array({e.u, e.v}));
  return arr;
}

ordered_json refs_to_json(std::span<const EdgeRef> refs) {
  ordered_json arr = ordered_json::array();
  for (const auto& r : refs) {
    arr.push_back(ordered_json{{"graph_id", r.graph_id},
                               {"edge", ordered_json::array({r.endpoints.u, r.endpoints.v})}});
  }
  return arr;
}

}  // namespace

ordered_json curvature_record_to_json(const GraphCurvature& gc) {
  ordered_json out = ordered_json::object();
  out["graph_id"] = gc.graph_id;
  out["edges"] = edges_to_json(gc.edges);
  out["bfc"] = gc.bfc;
  if (gc.bfc.empty()) {
    out["weighted_mean"] = nullptr;
    out["negative_fraction"] = nullptr;
  } else {
    double sum = 0.0;
    std::size_t neg = 0;
    for (double b : gc.bfc) {
      sum += b;
      neg += b < 0.0;
    }
    const auto n = static_cast<double>(gc.bfc.size());
    out["weighted_mean"] = sum / n;
    out["negative_fraction"] = static_cast<double>(neg) / n;
  }
  return out;
}

GraphCurvature curvature_record_from_json(const ordered_json& obj) {
  if (!obj.is_object() || !obj.contains("graph_id") || !obj["graph_id"].is_string()) {
    throw ValidationError("curvature record must be an object with a string 'graph_id'");
  }
  GraphCurvature gc;
  gc.graph_id = obj["graph_id"].get<std::string>();
  const std::string ctx = "curvature record '" + gc.graph_id + "'";
  if (!obj.contains("edges") || !obj["edges"].is_array() || !obj.contains("bfc") || !obj["bfc"].is_array()) {
    throw ValidationError(ctx + ": 'edges' and 'bfc' arrays are required");
  }
  try {
    for (const auto& e : obj["edges"]) {
      if (!e.is_array() || e.size() != 2) throw ValidationError(ctx + ": edge must be a pair");
      gc.edges.push_back(Edge::canonical(e[0].get<NodeId>(), e[1].get<NodeId>()));
    }
    for (const auto& b : obj["bfc"]) gc.bfc.push_back(b.get<double>());
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(ctx + ": " + e.what());
  }
  if (gc.edges.size() != gc.bfc.size()) throw ValidationError(ctx + ": 'edges' and 'bfc' differ in length");
  return gc;
}

std::vector<GraphCurvature> load_curvature(const std::filesystem::path& path) {
  std::vector<GraphCurvature> out;
  for (const auto& row : read_json_lines(path)) {
    try {
      out.push_back(curvature_record_from_json(row));
    } catch (const ValidationError& e) {
      throw ValidationError(path.string() + ": " + e.what());
    }
  }
  return out;
}

ordered_json summary_to_json(const CurvatureSummary& s) {
  ordered_json out = ordered_json::object();
  ordered_json edges = ordered_json::array();
  ordered_json bfc = ordered_json::array();
  for (const auto& ec : s.per_edge) {
    edges.push_back(ordered_json::array({ec.ref.endpoints.u, ec.ref.endpoints.v}));
    bfc.push_back(ec.bfc);
  }
  out["edges"] = std::move(edges);
  out["bfc"] = std::move(bfc);
  out["weights"] = s.weights_used;
  out["weighted_mean"] = s.weighted_mean;
  out["negative_fraction"] = s.negative_fraction;
  return out;
}

ordered_json collapse_to_json(const CollapseReport& r) {
  ordered_json out = ordered_json::object();
  out["graph_id"] = r.graph_id;
  out["static_negative_fraction"] = r.static_negative_fraction;
  out["activation_negative_fraction"] = r.activation_negative_fraction;
  out["static_weighted_bfc"] = r.static_summary.weighted_mean;
  out["activation_weighted_bfc"] = r.activation_summary.weighted_mean;
  out["static_spectral_gap"] = r.static_spectral_gap;
  out["activation_spectral_gap"] = r.activation_spectral_gap;
  out["static_summary"] = summary_to_json(r.static_summary);
  out["activation_summary"] = summary_to_json(r.activation_summary);
  return out;
}

ordered_json enrichment_to_json(const EnrichmentTable& t) {
  ordered_json out = ordered_json::object();
  ordered_json entries = ordered_json::array();
  for (const auto& e : t.entries) {
    ordered_json o = ordered_json::object();
    o["curvature"] = e.curvature;
    o["edges"] = e.edges;
    o["ma_edges"] = e.ma_edges;
    o["base_prob"] = e.base_prob;
    o["ma_prob"] = e.ma_prob;
    o["enrichment"] = optional_number(e.enrichment);
    entries.push_back(std::move(o));
  }
  out["entries"] = std::move(entries);
  out["counts"] = ordered_json{{"total_edges", t.total_edges}, {"total_ma_edges", t.total_ma_edges}};
  out["warning_no_ma"] = t.no_ma_warning;
  return out;
}

ordered_json layer_evolution_to_json(std::span<const LayerEvolutionRow> rows) {
  ordered_json out = ordered_json::array();
  for (const auto& r : rows) {
    ordered_json means = ordered_json::array();
    for (const auto& m : r.mean_ratio) means.push_back(optional_number(m));
    out.push_back(ordered_json{{"curvature", r.curvature}, {"mean_ratio", std::move(means)}, {"count", r.count}});
  }
  return out;
}

ordered_json hop_histogram_to_json(const HopHistogram& h) {
  ordered_json by_hop = ordered_json::array();
  for (const auto& [hop, count] : h.by_hop) by_hop.push_back(ordered_json{{"hop", hop}, {"count", count}});
  return ordered_json{{"by_hop", std::move(by_hop)}, {"unreachable", h.unreachable}, {"total", h.total()}};
}

EvalReport eval_report_from_json(const ordered_json& obj) {
  if (!obj.is_object()) throw ValidationError("evaluation report must be a JSON object");
  if (!obj.contains("variant") || !obj["variant"].is_string()) {
    throw ValidationError("evaluation report: missing string 'variant'");
  }
  EvalReport r;
  r.variant = parse_variant(obj["variant"].get<std::string>());
  if (!obj.contains("loss") || !obj["loss"].is_number()) {
    throw ValidationError("evaluation report: missing numeric 'loss'");
  }
  r.loss = obj["loss"].get<double>();
  if (!std::isfinite(r.loss)) throw ValidationError("evaluation report: loss must be finite");
  if (obj.contains("per_graph") && !obj["per_graph"].is_null()) {
    std::vector<std::pair<std::string, double>> per;
    for (const auto& row : obj["per_graph"]) {
      if (!row.is_object() || !row.contains("graph_id") || !row.contains("loss")) {
        throw ValidationError("evaluation report: per_graph rows need graph_id and loss");
      }
      per.emplace_back(row["graph_id"].get<std::string>(), row["loss"].get<double>());
    }
    r.per_graph = std::move(per);
  }
  return r;
}

ordered_json eval_report_to_json(const EvalReport& r) {
  ordered_json out{{"variant", variant_name(r.variant)}, {"loss", r.loss}};
  if (r.per_graph) {
    ordered_json per = ordered_json::array();
    for (const auto& [id, loss] : *r.per_graph) per.push_back(ordered_json{{"graph_id", id}, {"loss", loss}});
    out["per_graph"] = std::move(per);
  }
  return out;
}

EvalReport load_eval_report(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open evaluation report: " + path.string());
  try {
    return eval_report_from_json(ordered_json::parse(in));
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(path.string() + ": " + e.what());
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

ordered_json delta_table_to_json(const DeltaTable& t) {
  ordered_json rows = ordered_json::array();
  for (const auto& r : t.rows) {
    rows.push_back(ordered_json{{"variant", variant_name(r.variant)},
                                {"loss", r.loss},
                                {"delta", r.delta},
                                {"relative_error_pct", optional_number(r.relative_error_pct)}});
  }
  return ordered_json{{"baseline_loss", t.baseline_loss}, {"rows", std::move(rows)}, {"warnings", t.warnings}};
}

ordered_json pruning_sets_to_json(const PruningSets& s) {
  return ordered_json{{"set_a", refs_to_json(s.set_a)},
                      {"set_b", refs_to_json(s.set_b)},
                      {"set_c", refs_to_json(s.set_c)},
                      {"unflagged_positive", refs_to_json(s.unflagged_positive)},
                      {"excluded_zero", refs_to_json(s.excluded_zero)}};
}

}  // namespace curveprobe
