#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "curveprobe/graph.hpp"

namespace curveprobe {

enum class LaplacianKind {
  Normalized,    ///< I - D^{-1/2} A D^{-1/2}
  Unnormalized,  ///< D - A
};

struct SpectralOptions {
  LaplacianKind laplacian{LaplacianKind::Normalized};
  /// Restrict to the largest connected component of the edge set's node
  /// support. When false every supported node is kept, so a disconnected
  /// edge set has a zero gap.
  bool largest_component{true};
  /// Dense eigensolver bound on the number of analyzed nodes.
  std::size_t max_nodes{2048};
};

/// Eigenvalues of the Laplacian of the analyzed node set, ascending.
/// Isolated nodes (no incident edge) are never part of the analyzed set.
/// Throws ValidationError on an empty edge set or out-of-range endpoints
/// and CapabilityError above max_nodes.
std::vector<double> laplacian_spectrum(std::span<const Edge> edges, std::size_t num_nodes,
                                       const SpectralOptions& options = {});

/// Second-smallest Laplacian eigenvalue, clamped at zero.
double spectral_gap(std::span<const Edge> edges, std::size_t num_nodes, const SpectralOptions& options = {});

}  // namespace curveprobe
