#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "curveprobe/graph.hpp"

namespace curveprobe {

enum class FeatureMode { Topological, Permuted };
enum class Split { Train, Test };

/// Where each dummy clique's bridge lands on the target side.
enum class DummyAttach {
  TargetNode,    ///< the target node itself
  TargetClique,  ///< a target-clique node that is neither the target nor the bridge node
};

struct BarbellSpec {
  std::size_t clique_size{4};
  std::size_t num_dummy_cliques{0};  ///< 0 standard, 1 modified, 3 extended
  std::size_t feature_dim{16};
  std::size_t num_graphs{256};
  FeatureMode feature_mode{FeatureMode::Topological};
  std::uint64_t seed{7};
  Split split{Split::Train};
  DummyAttach dummy_attach{DummyAttach::TargetNode};
};

/// Throws ValidationError for clique_size < 3, feature_dim < 1, a dummy
/// count outside {0, 1, 3}, or fewer feature dimensions than dummy cliques.
void validate_spec(const BarbellSpec& spec);

/// Number of dummy cliques for "standard", "modified" or "extended".
std::size_t dummy_cliques_for(const std::string& variant);

/// Barbell edge types, stored as integer edge features.
enum class EdgeType : int {
  IntraClique = 0,
  SourceToBridge = 1,  ///< source node to the source-side bridge node
  BridgeToTarget = 2,  ///< target-side bridge node to the target node
  Bridge = 3,          ///< source clique to target clique
  DummyBridge = 4,     ///< dummy clique to the target side
};

/// Layout with k = clique_size: source clique [0, k) with the source at 0
/// and its bridge node at k-1; target clique [k, 2k) with its bridge node
/// at k and the target at k+1; dummy clique d occupies [2k + dk, 2k + (d+1)k)
/// with its signal node first and its bridge node last.
///
/// Features: the source carries an i.i.d. standard normal vector drawn per
/// graph, dummy signal node d carries the unit vector e_d, every other node
/// is zero. The regression target y is the source vector. Each graph draws
/// from its own stream seeded by (seed, split, index), so the train and
/// test splits never share randomness.
Graph gen_barbell_graph(const BarbellSpec& spec, std::size_t index);
std::vector<Graph> gen_barbell(const BarbellSpec& spec);

/// Recover the edge type of a generated barbell from its roles and
/// topology. Throws ValidationError if the graph lacks source/target roles
/// or the source clique is not joined to the rest by exactly one bridge.
EdgeType edge_type(const Graph& g, NodeId i, NodeId j);

}  // namespace curveprobe
