#include "curveprobe/collapse.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "curveprobe/errors.hpp"

namespace curveprobe {

std::vector<Edge> ActivationGraph::effective_edge_list() const {
  std::vector<Edge> out;
  out.reserve(effective_edges.size());
  for (const auto& p : effective_edges) out.push_back(Edge{p.src, p.dst});
  return out;
}

std::vector<double> ActivationGraph::effective_weights() const {
  std::vector<double> out;
  out.reserve(effective_edges.size());
  for (const auto& p : effective_edges) out.push_back(p.weight);
  return out;
}

ActivationGraph build_activation_graph(const Graph& g, const ActivationLog& log,
                                       const ActivationGraphOptions& options) {
  if (log.graph_id != g.id()) {
    throw ValidationError("activation log '" + log.graph_id + "' does not match graph '" + g.id() + "'");
  }
  if (std::isnan(options.theta) || options.theta < 0.0) {
    throw ValidationError("activation threshold theta must be >= 0");
  }
  const auto ratios = activation_ratios(log, options.median_scope);

  struct Directed {
    double sum = 0.0;
    double max = 0.0;
    std::size_t n = 0;
  };
  std::map<std::pair<NodeId, NodeId>, Directed> directed;
  for (const auto& r : ratios) {
    if (r.src >= g.num_nodes() || r.dst >= g.num_nodes()) {
      std::ostringstream os;
      os << "activation log '" << log.graph_id << "': pair (" << r.src << ", " << r.dst
         << ") is outside the graph";
      throw ValidationError(os.str());
    }
    if (r.src == r.dst) continue;
    if (options.structural_only && !g.has_edge(r.src, r.dst)) continue;
    auto& d = directed[{r.src, r.dst}];
    d.sum += r.ratio;
    d.max = d.n == 0 ? r.ratio : std::max(d.max, r.ratio);
    ++d.n;
  }

  std::map<Edge, std::pair<double, std::size_t>> undirected;
  for (const auto& [key, d] : directed) {
    const double agg = options.aggregation == Aggregation::Mean ? d.sum / static_cast<double>(d.n) : d.max;
    auto& u = undirected[Edge::canonical(key.first, key.second)];
    u.first += agg;
    ++u.second;
  }

  ActivationGraph ag;
  ag.base_graph_id = g.id();
  ag.num_nodes = g.num_nodes();
  for (const auto& [edge, acc] : undirected) {
    const ActivationPair p{edge.u, edge.v, acc.first / static_cast<double>(acc.second)};
    ag.pairs.push_back(p);
    if (p.weight >= options.theta) ag.effective_edges.push_back(p);
  }
  return ag;
}

CollapseReport curvature_shift(const Graph& g, const ActivationGraph& ag, const SpectralOptions& spectral) {
  if (ag.base_graph_id != g.id()) {
    throw ValidationError("activation graph of '" + ag.base_graph_id + "' applied to graph '" + g.id() + "'");
  }
  if (g.num_edges() == 0) throw ValidationError("graph '" + g.id() + "' has no edges");
  if (ag.effective_edges.empty()) {
    throw ValidationError("graph '" + g.id() + "': the activation graph has no effective edges");
  }
  GraphData d;
  d.graph_id = g.id();
  d.num_nodes = g.num_nodes();
  d.edges = ag.effective_edge_list();
  const Graph effective(std::move(d));

  CollapseReport rep;
  rep.graph_id = g.id();
  rep.static_summary = curvature_summary(bfc_all(g));
  rep.activation_summary = curvature_summary(bfc_all(effective), ag.effective_weights());
  rep.static_negative_fraction = rep.static_summary.negative_fraction;
  rep.activation_negative_fraction = rep.activation_summary.negative_fraction;
  rep.static_spectral_gap = spectral_gap(g.edges(), g.num_nodes(), spectral);
  rep.activation_spectral_gap = spectral_gap(effective.edges(), effective.num_nodes(), spectral);
  return rep;
}

}  // namespace curveprobe
