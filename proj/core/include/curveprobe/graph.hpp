#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace curveprobe {

using NodeId = std::uint32_t;

/// Undirected edge in canonical form (u < v).
struct Edge {
  NodeId u{0};
  NodeId v{0};

  static Edge canonical(NodeId a, NodeId b) noexcept {
    return a < b ? Edge{a, b} : Edge{b, a};
  }
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// An edge of a named graph. Attention pairs may also be carried as EdgeRefs,
/// so structural membership is checked by the consumer, not here.
struct EdgeRef {
  std::string graph_id;
  Edge endpoints;

  friend auto operator<=>(const EdgeRef&, const EdgeRef&) = default;
};

struct Roles {
  std::optional<NodeId> source;
  std::optional<NodeId> target;
  std::vector<NodeId> dummy_sources;
  // Keys other than the three above, kept verbatim for round trips.
  nlohmann::ordered_json extra = nlohmann::ordered_json::object();

  friend bool operator==(const Roles&, const Roles&) = default;
};

/// Dense row-major node feature matrix.
struct FeatureMatrix {
  std::size_t rows{0};
  std::size_t cols{0};
  std::vector<double> values;

  std::span<const double> row(std::size_t r) const {
    return {values.data() + r * cols, cols};
  }
  friend bool operator==(const FeatureMatrix&, const FeatureMatrix&) = default;
};

/// Everything needed to construct a Graph. Edges may arrive in any
/// orientation and order; Graph canonicalizes them.
struct GraphData {
  std::string graph_id;
  std::size_t num_nodes{0};
  std::vector<Edge> edges;
  std::optional<FeatureMatrix> node_features;
  std::optional<std::vector<std::int64_t>> edge_features;
  std::optional<Roles> roles;
  std::optional<std::vector<double>> target_value;
  nlohmann::ordered_json extra = nlohmann::ordered_json::object();
};

/// Immutable undirected simple graph with sorted CSR adjacency.
///
/// Edges are stored in lexicographic (u, v) order with u < v, and every
/// per-edge output of the toolkit follows that order. Construction rejects
/// out-of-range endpoints, self-loops, and duplicates with ValidationError.
class Graph {
 public:
  Graph() = default;
  explicit Graph(GraphData data);

  const std::string& id() const noexcept { return id_; }
  std::size_t num_nodes() const noexcept { return num_nodes_; }
  std::size_t num_edges() const noexcept { return edges_.size(); }
  std::span<const Edge> edges() const noexcept { return edges_; }

  /// Sorted neighbor list.
  std::span<const NodeId> neighbors(NodeId i) const;
  std::size_t degree(NodeId i) const;
  bool has_edge(NodeId a, NodeId b) const;
  /// Position of the edge in canonical order, if present.
  std::optional<std::size_t> edge_index(NodeId a, NodeId b) const;

  const std::optional<FeatureMatrix>& node_features() const noexcept { return node_features_; }
  const std::optional<std::vector<std::int64_t>>& edge_features() const noexcept {
    return edge_features_;
  }
  const std::optional<Roles>& roles() const noexcept { return roles_; }
  const std::optional<std::vector<double>>& target_value() const noexcept {
    return target_value_;
  }
  const nlohmann::ordered_json& extra() const noexcept { return extra_; }

  /// Copy of the construction data, in canonical form.
  GraphData data() const;

  /// Same graph with the given canonical edges removed (and their edge
  /// features). Node count and every other field are unchanged.
  Graph without_edges(std::span<const Edge> removed, std::string new_id) const;

 private:
  void check_node(NodeId i) const;

  std::string id_;
  std::size_t num_nodes_{0};
  std::vector<Edge> edges_;
  std::vector<std::size_t> offsets_;
  std::vector<NodeId> adjacency_;
  std::optional<FeatureMatrix> node_features_;
  std::optional<std::vector<std::int64_t>> edge_features_;
  std::optional<Roles> roles_;
  std::optional<std::vector<double>> target_value_;
  nlohmann::ordered_json extra_ = nlohmann::ordered_json::object();
};

inline constexpr std::size_t kUnreachable = static_cast<std::size_t>(-1);

/// Breadth-first hop count between two nodes; 0 when equal and
/// kUnreachable when no path exists.
std::size_t hop_distance(const Graph& g, NodeId from, NodeId to);

/// Hop counts from one node to every node (kUnreachable where disconnected).
std::vector<std::size_t> hop_distances_from(const Graph& g, NodeId from);

/// Component label per node, labels assigned in order of smallest member.
std::vector<std::size_t> connected_components(std::size_t num_nodes, std::span<const Edge> edges);

}  // namespace curveprobe
