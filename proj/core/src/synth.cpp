#include "curveprobe/synth.hpp"

#include <algorithm>
#include <iomanip>
#include <random>
#include <set>
#include <sstream>

#include "curveprobe/errors.hpp"

namespace curveprobe {

void validate_spec(const BarbellSpec& spec) {
  if (spec.clique_size < 3) throw ValidationError("barbell clique_size must be at least 3");
  if (spec.feature_dim < 1) throw ValidationError("barbell feature_dim must be at least 1");
  if (spec.num_dummy_cliques != 0 && spec.num_dummy_cliques != 1 && spec.num_dummy_cliques != 3) {
    throw ValidationError("barbell num_dummy_cliques must be 0, 1 or 3");
  }
  if (spec.feature_dim < spec.num_dummy_cliques) {
    throw ValidationError("barbell feature_dim must be >= num_dummy_cliques for distinct dummy signals");
  }
}

std::size_t dummy_cliques_for(const std::string& variant) {
  if (variant == "standard") return 0;
  if (variant == "modified") return 1;
  if (variant == "extended") return 3;
  throw ValidationError("unknown barbell variant '" + variant + "' (standard|modified|extended)");
}

Graph gen_barbell_graph(const BarbellSpec& spec, std::size_t index) {
  validate_spec(spec);
  const auto k = static_cast<NodeId>(spec.clique_size);
  const auto dummies = static_cast<NodeId>(spec.num_dummy_cliques);
  const NodeId source = 0, source_bridge = k - 1, target_bridge = k, target = k + 1;

  std::seed_seq seq{static_cast<std::uint32_t>(spec.seed), static_cast<std::uint32_t>(spec.seed >> 32),
                    static_cast<std::uint32_t>(spec.split == Split::Train ? 0 : 1),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  std::mt19937_64 rng(seq);

  GraphData d;
  std::ostringstream id;
  id << "barbell-" << (spec.split == Split::Train ? "train" : "test") << "-" << std::setw(4)
     << std::setfill('0') << index;
  d.graph_id = id.str();
  d.num_nodes = static_cast<std::size_t>(k) * (2 + dummies);

  std::vector<std::int64_t> types;
  auto add = [&](NodeId a, NodeId b, EdgeType t) {
    d.edges.push_back(Edge::canonical(a, b));
    types.push_back(static_cast<std::int64_t>(t));
  };
  auto add_clique = [&](NodeId first) {
    for (NodeId a = first; a < first + k; ++a)
      for (NodeId b = a + 1; b < first + k; ++b) add(a, b, EdgeType::IntraClique);
  };
  add_clique(0);
  add_clique(k);
  add(source_bridge, target_bridge, EdgeType::Bridge);
  Roles roles;
  roles.source = source;
  roles.target = target;
  for (NodeId q = 0; q < dummies; ++q) {
    const NodeId first = 2 * k + q * k;
    add_clique(first);
    roles.dummy_sources.push_back(first);
    const NodeId anchor =
        spec.dummy_attach == DummyAttach::TargetNode ? target : k + 2 + q % (k - 2);
    add(first + k - 1, anchor, EdgeType::DummyBridge);
  }
  for (std::size_t e = 0; e < d.edges.size(); ++e) {
    if (d.edges[e] == Edge::canonical(source, source_bridge)) types[e] = static_cast<int>(EdgeType::SourceToBridge);
    if (d.edges[e] == Edge::canonical(target_bridge, target)) types[e] = static_cast<int>(EdgeType::BridgeToTarget);
  }

  FeatureMatrix fm;
  fm.rows = d.num_nodes;
  fm.cols = spec.feature_dim;
  fm.values.assign(fm.rows * fm.cols, 0.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> signal(spec.feature_dim);
  for (auto& x : signal) x = normal(rng);
  std::copy(signal.begin(), signal.end(), fm.values.begin() + static_cast<std::ptrdiff_t>(source * fm.cols));
  for (NodeId q = 0; q < dummies; ++q) {
    fm.values[roles.dummy_sources[q] * fm.cols + q] = 1.0;
  }

  if (spec.feature_mode == FeatureMode::Permuted) std::shuffle(types.begin(), types.end(), rng);

  d.node_features = std::move(fm);
  d.edge_features = std::move(types);
  d.roles = std::move(roles);
  d.target_value = std::move(signal);
  return Graph(std::move(d));
}

std::vector<Graph> gen_barbell(const BarbellSpec& spec) {
  validate_spec(spec);
  std::vector<Graph> out;
  out.reserve(spec.num_graphs);
  for (std::size_t i = 0; i < spec.num_graphs; ++i) out.push_back(gen_barbell_graph(spec, i));
  return out;
}

EdgeType edge_type(const Graph& g, NodeId i, NodeId j) {
  if (!g.has_edge(i, j)) {
    std::ostringstream os;
    os << "graph '" << g.id() << "': (" << i << ", " << j << ") is not an edge";
    throw ValidationError(os.str());
  }
  const auto& roles = g.roles();
  if (!roles || !roles->source || !roles->target) {
    throw ValidationError("graph '" + g.id() + "' is not a barbell: missing source/target roles");
  }
  const NodeId source = *roles->source, target = *roles->target;

  // The source is a non-bridge node, so its closed neighbourhood is its clique.
  auto clique_of = [&](NodeId n) {
    std::set<NodeId> c(g.neighbors(n).begin(), g.neighbors(n).end());
    c.insert(n);
    return c;
  };
  auto leaving = [&](const std::set<NodeId>& clique) {
    std::vector<Edge> out;
    for (NodeId a : clique)
      for (NodeId b : g.neighbors(a))
        if (!clique.contains(b)) out.push_back(Edge::canonical(a, b));
    return out;
  };
  const auto source_clique = clique_of(source);
  const auto bridges = leaving(source_clique);
  if (bridges.size() != 1) {
    throw ValidationError("graph '" + g.id() + "' is not a barbell: source clique has " +
                          std::to_string(bridges.size()) + " outgoing edges");
  }
  const Edge bridge = bridges.front();
  const NodeId source_bridge = source_clique.contains(bridge.u) ? bridge.u : bridge.v;
  const NodeId target_bridge = bridge.u == source_bridge ? bridge.v : bridge.u;
  if (!g.has_edge(target_bridge, target)) {
    throw ValidationError("graph '" + g.id() + "' is not a barbell: target is not adjacent to the bridge");
  }

  const Edge e = Edge::canonical(i, j);
  if (e == bridge) return EdgeType::Bridge;
  if (e == Edge::canonical(source, source_bridge)) return EdgeType::SourceToBridge;
  if (e == Edge::canonical(target_bridge, target)) return EdgeType::BridgeToTarget;
  for (NodeId dummy : roles->dummy_sources) {
    for (const Edge& out : leaving(clique_of(dummy))) {
      if (out == e) return EdgeType::DummyBridge;
    }
  }
  return EdgeType::IntraClique;
}

}  // namespace curveprobe
