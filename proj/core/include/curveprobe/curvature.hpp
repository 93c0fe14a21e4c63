#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "curveprobe/graph.hpp"
#include "curveprobe/rational.hpp"

namespace curveprobe {

/// Local motif ingredients of Balanced Forman curvature at an oriented edge
/// i ~ j. A qualifying 4-cycle is i - k - w - j - i with k a neighbor of i
/// that is neither j nor adjacent to j, and w a neighbor of j that is
/// neither i nor adjacent to i (no diagonal inside the cycle).
struct MotifCounts {
  std::size_t triangles{0};  ///< common neighbours of i and j
  std::size_t squares_i{0};  ///< distinct k on qualifying 4-cycles
  std::size_t squares_j{0};  ///< distinct w on qualifying 4-cycles
  std::size_t gamma_max{0};  ///< max number of qualifying 4-cycles through one outer node

  friend bool operator==(const MotifCounts&, const MotifCounts&) = default;
};

MotifCounts motif_counts(const Graph& g, NodeId i, NodeId j);

/// Balanced Forman curvature assembled from degrees and motif counts:
///
///   2/d_i + 2/d_j - 2 + 2 t / max(d_i, d_j) + t / min(d_i, d_j)
///     + (s_i + s_j) / (gamma_max * max(d_i, d_j))
///
/// where the final term is 0 when s_i + s_j = 0.
Rational bfc_from_counts(std::size_t deg_i, std::size_t deg_j, const MotifCounts& m);

/// Exact curvature of a structural edge. Throws ValidationError if (i, j)
/// is not an edge.
Rational bfc_exact(const Graph& g, NodeId i, NodeId j);
double bfc_edge(const Graph& g, NodeId i, NodeId j);

/// Reference implementation: dense adjacency matrix and exhaustive
/// enumeration of every triangle and every diagonal-free 4-cycle through
/// the edge. Quadratic in num_nodes per edge; meant for small graphs.
MotifCounts motif_counts_bruteforce(const Graph& g, NodeId i, NodeId j);
Rational bfc_bruteforce_exact(const Graph& g, NodeId i, NodeId j);
double bfc_bruteforce(const Graph& g, NodeId i, NodeId j);

struct EdgeCurvature {
  EdgeRef ref;
  Rational exact;
  double bfc{0.0};
};

/// Curvature of every edge in canonical edge order.
std::vector<EdgeCurvature> bfc_all(const Graph& g);

struct CurvatureSummary {
  std::vector<EdgeCurvature> per_edge;
  double weighted_mean{0.0};
  double negative_fraction{0.0};
  std::vector<double> weights_used;
};

/// Per-edge curvature of one graph as stored in curvature files.
struct GraphCurvature {
  std::string graph_id;
  std::vector<Edge> edges;  ///< canonical order
  std::vector<double> bfc;
};

GraphCurvature graph_curvature(const Graph& g);

/// Weighted mean curvature and weighted share of negatively curved edges.
/// Uniform weights when none are given. Throws ValidationError on a length
/// mismatch, a negative weight, or a zero total weight.
CurvatureSummary curvature_summary(std::vector<EdgeCurvature> per_edge,
                                   std::optional<std::vector<double>> weights = std::nullopt);

}  // namespace curveprobe
