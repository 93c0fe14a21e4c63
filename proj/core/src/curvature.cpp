#include "curveprobe/curvature.hpp"

#include <algorithm>
#include <sstream>

#include "curveprobe/errors.hpp"

namespace curveprobe {

namespace {

void require_edge(const Graph& g, NodeId i, NodeId j) {
  if (!g.has_edge(i, j)) {
    std::ostringstream os;
    os << "graph '" << g.id() << "': (" << i << ", " << j << ") is not an edge";
    throw ValidationError(os.str());
  }
}

// Sorted set difference a \ (b ∪ {skip}).
std::vector<NodeId> outer_set(std::span<const NodeId> a, std::span<const NodeId> b, NodeId skip) {
  std::vector<NodeId> out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  std::erase(out, skip);
  return out;
}

std::size_t intersection_size(std::span<const NodeId> a, std::span<const NodeId> b) {
  std::size_t n = 0;
  auto x = a.begin();
  auto y = b.begin();
  while (x != a.end() && y != b.end()) {
    if (*x < *y) {
      ++x;
    } else if (*y < *x) {
      ++y;
    } else {
      ++n;
      ++x;
      ++y;
    }
  }
  return n;
}

}  // namespace

MotifCounts motif_counts(const Graph& g, NodeId i, NodeId j) {
  require_edge(g, i, j);
  const auto ni = g.neighbors(i);
  const auto nj = g.neighbors(j);

  MotifCounts m;
  m.triangles = intersection_size(ni, nj);

  const std::vector<NodeId> side_i = outer_set(ni, nj, j);
  const std::vector<NodeId> side_j = outer_set(nj, ni, i);
  for (NodeId k : side_i) {
    const std::size_t cycles = intersection_size(g.neighbors(k), side_j);
    if (cycles > 0) ++m.squares_i;
    m.gamma_max = std::max(m.gamma_max, cycles);
  }
  for (NodeId w : side_j) {
    const std::size_t cycles = intersection_size(g.neighbors(w), side_i);
    if (cycles > 0) ++m.squares_j;
    m.gamma_max = std::max(m.gamma_max, cycles);
  }
  return m;
}

Rational bfc_from_counts(std::size_t deg_i, std::size_t deg_j, const MotifCounts& m) {
  const auto di = static_cast<std::int64_t>(deg_i);
  const auto dj = static_cast<std::int64_t>(deg_j);
  const auto dmax = std::max(di, dj);
  const auto dmin = std::min(di, dj);
  const auto t = static_cast<std::int64_t>(m.triangles);

  Rational r = Rational(2, di) + Rational(2, dj) - Rational(2);
  r += Rational(2 * t, dmax) + Rational(t, dmin);
  const auto squares = static_cast<std::int64_t>(m.squares_i + m.squares_j);
  if (squares > 0) {
    r += Rational(squares, static_cast<std::int64_t>(m.gamma_max) * dmax);
  }
  return r;
}

Rational bfc_exact(const Graph& g, NodeId i, NodeId j) {
  const MotifCounts m = motif_counts(g, i, j);
  return bfc_from_counts(g.degree(i), g.degree(j), m);
}

double bfc_edge(const Graph& g, NodeId i, NodeId j) { return bfc_exact(g, i, j).to_double(); }

MotifCounts motif_counts_bruteforce(const Graph& g, NodeId i, NodeId j) {
  const std::size_t n = g.num_nodes();
  std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
  for (const auto& e : g.edges()) adj[e.u][e.v] = adj[e.v][e.u] = true;
  if (i >= n || j >= n || !adj[i][j]) require_edge(g, i, j);

  MotifCounts m;
  for (std::size_t k = 0; k < n; ++k) {
    if (adj[i][k] && adj[j][k]) ++m.triangles;
  }
  // cycles_through[x] = number of qualifying 4-cycles that use x as an outer node
  std::vector<std::size_t> through_k(n, 0), through_w(n, 0);
  for (std::size_t k = 0; k < n; ++k) {
    if (k == i || k == j) continue;
    for (std::size_t w = 0; w < n; ++w) {
      if (w == i || w == j || w == k) continue;
      const bool cycle = adj[i][k] && adj[k][w] && adj[w][j];
      const bool diagonal = adj[k][j] || adj[w][i];
      if (cycle && !diagonal) {
        ++through_k[k];
        ++through_w[w];
      }
    }
  }
  for (std::size_t x = 0; x < n; ++x) {
    if (through_k[x] > 0) ++m.squares_i;
    if (through_w[x] > 0) ++m.squares_j;
    m.gamma_max = std::max({m.gamma_max, through_k[x], through_w[x]});
  }
  return m;
}

Rational bfc_bruteforce_exact(const Graph& g, NodeId i, NodeId j) {
  const MotifCounts m = motif_counts_bruteforce(g, i, j);
  std::size_t di = 0, dj = 0;
  for (const auto& e : g.edges()) {
    di += (e.u == i || e.v == i);
    dj += (e.u == j || e.v == j);
  }
  return bfc_from_counts(di, dj, m);
}

double bfc_bruteforce(const Graph& g, NodeId i, NodeId j) {
  return bfc_bruteforce_exact(g, i, j).to_double();
}

std::vector<EdgeCurvature> bfc_all(const Graph& g) {
  std::vector<EdgeCurvature> out;
  out.reserve(g.num_edges());
  for (const auto& e : g.edges()) {
    Rational r = bfc_exact(g, e.u, e.v);
    out.push_back(EdgeCurvature{EdgeRef{g.id(), e}, r, r.to_double()});
  }
  return out;
}

GraphCurvature graph_curvature(const Graph& g) {
  GraphCurvature gc;
  gc.graph_id = g.id();
  gc.edges.assign(g.edges().begin(), g.edges().end());
  for (const auto& ec : bfc_all(g)) gc.bfc.push_back(ec.bfc);
  return gc;
}

CurvatureSummary curvature_summary(std::vector<EdgeCurvature> per_edge,
                                   std::optional<std::vector<double>> weights) {
  CurvatureSummary s;
  if (weights) {
    if (weights->size() != per_edge.size()) {
      std::ostringstream os;
      os << "curvature_summary: " << weights->size() << " weights for " << per_edge.size() << " edges";
      throw ValidationError(os.str());
    }
    s.weights_used = std::move(*weights);
  } else {
    s.weights_used.assign(per_edge.size(), 1.0);
  }
  double total = 0.0, weighted = 0.0, negative = 0.0;
  for (std::size_t k = 0; k < per_edge.size(); ++k) {
    const double w = s.weights_used[k];
    if (!(w >= 0.0)) throw ValidationError("curvature_summary: weights must be non-negative");
    total += w;
    weighted += w * per_edge[k].bfc;
    if (per_edge[k].exact < Rational(0)) negative += w;
  }
  if (!(total > 0.0)) throw ValidationError("curvature_summary: total weight is zero");
  s.weighted_mean = weighted / total;
  s.negative_fraction = negative / total;
  s.per_edge = std::move(per_edge);
  return s;
}

}  // namespace curveprobe
