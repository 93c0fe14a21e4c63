#pragma once

#include <limits>
#include <string>
#include <vector>

#include "curveprobe/activation.hpp"
#include "curveprobe/curvature.hpp"
#include "curveprobe/graph.hpp"
#include "curveprobe/spectral.hpp"

namespace curveprobe {

enum class Aggregation { Mean, Max };

/// Undirected attention pair (src < dst) with its symmetrized activation mass.
struct ActivationPair {
  NodeId src{0};
  NodeId dst{0};
  double weight{0.0};
};

/// Effective geometry induced by attention: every logged pair with its
/// aggregate ratio, and the subset at or above the threshold.
struct ActivationGraph {
  std::string base_graph_id;
  std::size_t num_nodes{0};
  std::vector<ActivationPair> pairs;            ///< canonical order
  std::vector<ActivationPair> effective_edges;  ///< pairs with weight >= theta

  std::vector<Edge> effective_edge_list() const;
  std::vector<double> effective_weights() const;
};

struct ActivationGraphOptions {
  Aggregation aggregation{Aggregation::Mean};
  /// Ratio cutoff; 1.0 keeps pairs at or above their group median.
  double theta{1.0};
  /// Drop logged pairs that are not structural edges.
  bool structural_only{false};
  MedianScope median_scope{MedianScope::LayerHead};
};

/// Aggregate each directed pair's ratios over layers and heads (mean or
/// max), average the two directions, drop self-pairs, then threshold.
ActivationGraph build_activation_graph(const Graph& g, const ActivationLog& log,
                                       const ActivationGraphOptions& options = {});

struct CollapseReport {
  std::string graph_id;
  CurvatureSummary static_summary;
  CurvatureSummary activation_summary;
  double static_negative_fraction{0.0};
  double activation_negative_fraction{0.0};
  double static_spectral_gap{0.0};
  double activation_spectral_gap{0.0};
};

/// Curvature of the static graph (uniform weights) against curvature of the
/// unweighted effective edge set, summarized with activation-mass weights.
/// Throws ValidationError if the effective edge set is empty.
CollapseReport curvature_shift(const Graph& g, const ActivationGraph& ag,
                               const SpectralOptions& spectral = {});

}  // namespace curveprobe
