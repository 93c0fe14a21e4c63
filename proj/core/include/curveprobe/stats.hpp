#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "curveprobe/activation.hpp"
#include "curveprobe/graph.hpp"

namespace curveprobe {

/// Grouping of curvature values. Exact grouping keys on the value rounded
/// to 1e-9 so that floating-point drift never splits a discrete value;
/// width grouping uses half-open bins [a, a + w) aligned at 0.
struct Binning {
  enum class Kind { Exact, Width };
  Kind kind{Kind::Exact};
  double width{0.0};

  static Binning exact() { return {}; }
  static Binning of_width(double w);

  std::int64_t key(double value) const;
};

struct EnrichmentEntry {
  double curvature{0.0};  ///< smallest value in the bin (exact) or bin lower edge (width)
  std::size_t edges{0};
  std::size_t ma_edges{0};
  double base_prob{0.0};
  double ma_prob{0.0};
  std::optional<double> enrichment;  ///< ma_prob / base_prob; absent without MA edges
};

struct EnrichmentTable {
  std::vector<EnrichmentEntry> entries;  ///< ascending curvature
  std::size_t total_edges{0};
  std::size_t total_ma_edges{0};
  bool no_ma_warning{false};
};

/// Ratio of the MA-conditional curvature distribution to the base curvature
/// distribution over structural edges. Throws ValidationError when the
/// inputs have different lengths.
EnrichmentTable enrichment(std::span<const double> bfc, const std::vector<bool>& ma_flags,
                           Binning binning = Binning::exact());

/// Per-layer ratio of each structural edge: the max over heads and both
/// attention directions, absent where the layer logged neither direction.
std::vector<std::vector<std::optional<double>>> edge_layer_ratios(const GraphRatios& ratios,
                                                                  std::span<const Edge> edges);

struct LayerEvolutionRow {
  double curvature{0.0};
  std::vector<std::optional<double>> mean_ratio;  ///< indexed by layer
  std::vector<std::size_t> count;
};

/// Mean ratio per (curvature bin, layer) over MA-flagged edges. Bins with no
/// MA edge produce no row; layers with no observation stay empty.
std::vector<LayerEvolutionRow> layer_evolution(
    std::span<const std::vector<std::optional<double>>> per_edge_layers,
    const std::vector<bool>& ma_flags, std::span<const double> bfc, Binning binning = Binning::exact());

struct Correlation {
  double pearson_r{0.0};
  double slope{0.0};
  double intercept{0.0};
};

/// Pearson correlation and ordinary least squares fit ys ~ slope * xs +
/// intercept. A constant response gives r = 0. Requires at least three
/// points and non-constant xs.
Correlation correlate(std::span<const double> xs, std::span<const double> ys);

/// Curvature coordinate of each node for node-level diagnostics such as
/// attention entropy: the minimum curvature over its incident edges.
std::vector<std::optional<double>> node_min_curvature(const Graph& g, std::span<const double> bfc);

}  // namespace curveprobe
