#include "curveprobe/stats.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "curveprobe/errors.hpp"

namespace curveprobe {

Binning Binning::of_width(double w) {
  if (!(w > 0.0) || !std::isfinite(w)) throw ValidationError("bin width must be positive and finite");
  return Binning{Kind::Width, w};
}

std::int64_t Binning::key(double value) const {
  if (kind == Kind::Exact) return std::llround(value * 1e9);
  return static_cast<std::int64_t>(std::floor(value / width));
}

namespace {

double bin_label(const Binning& b, std::int64_t key, double smallest_seen) {
  return b.kind == Binning::Kind::Exact ? smallest_seen : static_cast<double>(key) * b.width;
}

}  // namespace

EnrichmentTable enrichment(std::span<const double> bfc, const std::vector<bool>& ma_flags,
                           Binning binning) {
  if (bfc.size() != ma_flags.size()) {
    std::ostringstream os;
    os << "enrichment: " << bfc.size() << " curvature values but " << ma_flags.size() << " MA flags";
    throw ValidationError(os.str());
  }
  struct Acc {
    double smallest;
    std::size_t edges = 0;
    std::size_t ma = 0;
  };
  std::map<std::int64_t, Acc> bins;
  EnrichmentTable t;
  for (std::size_t k = 0; k < bfc.size(); ++k) {
    auto [it, inserted] = bins.try_emplace(binning.key(bfc[k]), Acc{bfc[k]});
    Acc& a = it->second;
    a.smallest = std::min(a.smallest, bfc[k]);
    ++a.edges;
    if (ma_flags[k]) {
      ++a.ma;
      ++t.total_ma_edges;
    }
  }
  t.total_edges = bfc.size();
  t.no_ma_warning = t.total_ma_edges == 0;
  for (const auto& [key, a] : bins) {
    EnrichmentEntry e;
    e.curvature = bin_label(binning, key, a.smallest);
    e.edges = a.edges;
    e.ma_edges = a.ma;
    e.base_prob = static_cast<double>(a.edges) / static_cast<double>(t.total_edges);
    if (t.total_ma_edges > 0) {
      e.ma_prob = static_cast<double>(a.ma) / static_cast<double>(t.total_ma_edges);
      e.enrichment = e.ma_prob / e.base_prob;
    }
    t.entries.push_back(e);
  }
  return t;
}

std::vector<std::vector<std::optional<double>>> edge_layer_ratios(const GraphRatios& ratios,
                                                                  std::span<const Edge> edges) {
  std::uint32_t num_layers = 0;
  for (const auto& r : ratios.ratios) num_layers = std::max(num_layers, r.layer + 1);
  std::map<Edge, std::size_t> index;
  for (std::size_t k = 0; k < edges.size(); ++k) index.emplace(Edge::canonical(edges[k].u, edges[k].v), k);

  std::vector<std::vector<std::optional<double>>> out(edges.size(),
                                                      std::vector<std::optional<double>>(num_layers));
  for (const auto& r : ratios.ratios) {
    if (r.src == r.dst) continue;
    auto it = index.find(Edge::canonical(r.src, r.dst));
    if (it == index.end()) continue;
    auto& cell = out[it->second][r.layer];
    cell = cell ? std::max(*cell, r.ratio) : r.ratio;
  }
  return out;
}

std::vector<LayerEvolutionRow> layer_evolution(
    std::span<const std::vector<std::optional<double>>> per_edge_layers, const std::vector<bool>& ma_flags,
    std::span<const double> bfc, Binning binning) {
  if (per_edge_layers.size() != ma_flags.size() || bfc.size() != ma_flags.size()) {
    throw ValidationError("layer_evolution: ratios, flags and curvature must align per edge");
  }
  std::size_t num_layers = 0;
  for (const auto& row : per_edge_layers) num_layers = std::max(num_layers, row.size());

  struct Acc {
    double smallest;
    std::vector<double> sum;
    std::vector<std::size_t> count;
  };
  std::map<std::int64_t, Acc> bins;
  for (std::size_t k = 0; k < bfc.size(); ++k) {
    if (!ma_flags[k]) continue;
    auto [it, inserted] = bins.try_emplace(
        binning.key(bfc[k]), Acc{bfc[k], std::vector<double>(num_layers, 0.0),
                                 std::vector<std::size_t>(num_layers, 0)});
    Acc& a = it->second;
    a.smallest = std::min(a.smallest, bfc[k]);
    for (std::size_t l = 0; l < per_edge_layers[k].size(); ++l) {
      if (const auto& v = per_edge_layers[k][l]) {
        a.sum[l] += *v;
        ++a.count[l];
      }
    }
  }
  std::vector<LayerEvolutionRow> rows;
  for (const auto& [key, a] : bins) {
    LayerEvolutionRow row;
    row.curvature = bin_label(binning, key, a.smallest);
    row.count = a.count;
    row.mean_ratio.resize(num_layers);
    for (std::size_t l = 0; l < num_layers; ++l) {
      if (a.count[l] > 0) row.mean_ratio[l] = a.sum[l] / static_cast<double>(a.count[l]);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

Correlation correlate(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw ValidationError("correlate: xs and ys differ in length");
  if (xs.size() < 3) throw ValidationError("correlate: at least three points are required");
  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    mx += xs[k];
    my += ys[k];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    const double dx = xs[k] - mx;
    const double dy = ys[k] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (!(sxx > 0.0)) throw ValidationError("correlate: xs has zero variance");
  Correlation c;
  c.slope = sxy / sxx;
  c.intercept = my - c.slope * mx;
  c.pearson_r = syy > 0.0 ? std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0) : 0.0;
  return c;
}

std::vector<std::optional<double>> node_min_curvature(const Graph& g, std::span<const double> bfc) {
  if (bfc.size() != g.num_edges()) {
    throw ValidationError("node_min_curvature: curvature list does not match the edge count");
  }
  std::vector<std::optional<double>> out(g.num_nodes());
  const auto edges = g.edges();
  for (std::size_t k = 0; k < edges.size(); ++k) {
    for (NodeId n : {edges[k].u, edges[k].v}) {
      out[n] = out[n] ? std::min(*out[n], bfc[k]) : bfc[k];
    }
  }
  return out;
}

}  // namespace curveprobe
