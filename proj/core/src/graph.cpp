#include "curveprobe/graph.hpp"

#include <algorithm>
#include <numeric>
#include <queue>
#include <sstream>

#include "curveprobe/errors.hpp"

namespace curveprobe {

namespace {

std::string edge_str(const Edge& e) {
  std::ostringstream os;
  os << "[" << e.u << ", " << e.v << "]";
  return os.str();
}

}  // namespace

Graph::Graph(GraphData data)
    : id_(std::move(data.graph_id)),
      num_nodes_(data.num_nodes),
      node_features_(std::move(data.node_features)),
      edge_features_(std::move(data.edge_features)),
      roles_(std::move(data.roles)),
      target_value_(std::move(data.target_value)),
      extra_(std::move(data.extra)) {
  if (edge_features_ && edge_features_->size() != data.edges.size()) {
    std::ostringstream os;
    os << "graph '" << id_ << "': edge_features has " << edge_features_->size()
       << " entries but there are " << data.edges.size() << " edges";
    throw ValidationError(os.str());
  }
  if (node_features_) {
    if (node_features_->rows != num_nodes_ ||
        node_features_->values.size() != node_features_->rows * node_features_->cols) {
      std::ostringstream os;
      os << "graph '" << id_ << "': node_features must have " << num_nodes_ << " rows";
      throw ValidationError(os.str());
    }
  }

  // Canonicalize orientation, then sort edges (carrying features along).
  std::vector<std::size_t> order(data.edges.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (auto& e : data.edges) {
    if (e.u >= num_nodes_ || e.v >= num_nodes_) {
      std::ostringstream os;
      os << "graph '" << id_ << "': edge " << edge_str(e) << " references a node >= num_nodes ("
         << num_nodes_ << ")";
      throw ValidationError(os.str());
    }
    if (e.u == e.v) {
      std::ostringstream os;
      os << "graph '" << id_ << "': self-loop " << edge_str(e) << " is not allowed";
      throw ValidationError(os.str());
    }
    e = Edge::canonical(e.u, e.v);
  }
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return data.edges[a] < data.edges[b]; });
  edges_.reserve(order.size());
  for (std::size_t k : order) edges_.push_back(data.edges[k]);
  for (std::size_t k = 1; k < edges_.size(); ++k) {
    if (edges_[k] == edges_[k - 1]) {
      throw ValidationError("graph '" + id_ + "': duplicate edge " + edge_str(edges_[k]));
    }
  }
  if (edge_features_) {
    std::vector<std::int64_t> sorted;
    sorted.reserve(order.size());
    for (std::size_t k : order) sorted.push_back((*edge_features_)[k]);
    edge_features_ = std::move(sorted);
  }
  if (roles_) {
    auto check_role = [&](NodeId n, const char* name) {
      if (n >= num_nodes_) {
        std::ostringstream os;
        os << "graph '" << id_ << "': role '" << name << "' node " << n << " is out of range";
        throw ValidationError(os.str());
      }
    };
    if (roles_->source) check_role(*roles_->source, "source");
    if (roles_->target) check_role(*roles_->target, "target");
    for (NodeId d : roles_->dummy_sources) check_role(d, "dummy_sources");
  }

  offsets_.assign(num_nodes_ + 1, 0);
  for (const auto& e : edges_) {
    ++offsets_[e.u + 1];
    ++offsets_[e.v + 1];
  }
  std::partial_sum(offsets_.begin(), offsets_.end(), offsets_.begin());
  adjacency_.resize(2 * edges_.size());
  std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
  for (const auto& e : edges_) {
    adjacency_[fill[e.u]++] = e.v;
    adjacency_[fill[e.v]++] = e.u;
  }
  for (std::size_t i = 0; i < num_nodes_; ++i) {
    std::sort(adjacency_.begin() + static_cast<std::ptrdiff_t>(offsets_[i]),
              adjacency_.begin() + static_cast<std::ptrdiff_t>(offsets_[i + 1]));
  }
}

void Graph::check_node(NodeId i) const {
  if (i >= num_nodes_) {
    std::ostringstream os;
    os << "graph '" << id_ << "': node " << i << " out of range (num_nodes = " << num_nodes_ << ")";
    throw ValidationError(os.str());
  }
}

std::span<const NodeId> Graph::neighbors(NodeId i) const {
  check_node(i);
  return std::span<const NodeId>(adjacency_).subspan(offsets_[i], offsets_[i + 1] - offsets_[i]);
}

std::size_t Graph::degree(NodeId i) const {
  check_node(i);
  return offsets_[i + 1] - offsets_[i];
}

bool Graph::has_edge(NodeId a, NodeId b) const {
  if (a >= num_nodes_ || b >= num_nodes_ || a == b) return false;
  auto nb = neighbors(a);
  return std::binary_search(nb.begin(), nb.end(), b);
}

std::optional<std::size_t> Graph::edge_index(NodeId a, NodeId b) const {
  if (a == b) return std::nullopt;
  const Edge key = Edge::canonical(a, b);
  auto it = std::lower_bound(edges_.begin(), edges_.end(), key);
  if (it == edges_.end() || *it != key) return std::nullopt;
  return static_cast<std::size_t>(it - edges_.begin());
}

GraphData Graph::data() const {
  GraphData d;
  d.graph_id = id_;
  d.num_nodes = num_nodes_;
  d.edges = edges_;
  d.node_features = node_features_;
  d.edge_features = edge_features_;
  d.roles = roles_;
  d.target_value = target_value_;
  d.extra = extra_;
  return d;
}

Graph Graph::without_edges(std::span<const Edge> removed, std::string new_id) const {
  std::vector<Edge> drop(removed.begin(), removed.end());
  for (auto& e : drop) e = Edge::canonical(e.u, e.v);
  std::sort(drop.begin(), drop.end());

  GraphData d = data();
  d.graph_id = std::move(new_id);
  d.edges.clear();
  if (d.edge_features) d.edge_features->clear();
  for (std::size_t k = 0; k < edges_.size(); ++k) {
    if (std::binary_search(drop.begin(), drop.end(), edges_[k])) continue;
    d.edges.push_back(edges_[k]);
    if (d.edge_features) d.edge_features->push_back((*edge_features_)[k]);
  }
  return Graph(std::move(d));
}

std::vector<std::size_t> hop_distances_from(const Graph& g, NodeId from) {
  std::vector<std::size_t> dist(g.num_nodes(), kUnreachable);
  (void)g.degree(from);  // range check
  std::queue<NodeId> frontier;
  dist[from] = 0;
  frontier.push(from);
  while (!frontier.empty()) {
    NodeId x = frontier.front();
    frontier.pop();
    for (NodeId y : g.neighbors(x)) {
      if (dist[y] == kUnreachable) {
        dist[y] = dist[x] + 1;
        frontier.push(y);
      }
    }
  }
  return dist;
}

std::size_t hop_distance(const Graph& g, NodeId from, NodeId to) {
  (void)g.degree(to);
  if (from == to) {
    (void)g.degree(from);
    return 0;
  }
  return hop_distances_from(g, from)[to];
}

std::vector<std::size_t> connected_components(std::size_t num_nodes, std::span<const Edge> edges) {
  std::vector<std::size_t> parent(num_nodes);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  for (const auto& e : edges) {
    std::size_t a = find(e.u), b = find(e.v);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
  std::vector<std::size_t> label(num_nodes, kUnreachable);
  std::vector<std::size_t> root_label(num_nodes, kUnreachable);
  std::size_t next = 0;
  for (std::size_t i = 0; i < num_nodes; ++i) {
    std::size_t r = find(i);
    if (root_label[r] == kUnreachable) root_label[r] = next++;
    label[i] = root_label[r];
  }
  return label;
}

}  // namespace curveprobe
