#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "curveprobe/activation.hpp"
#include "curveprobe/curvature.hpp"
#include "curveprobe/graph.hpp"

namespace curveprobe {

/// Structural edges split by massive activation and curvature sign.
/// Zero-curvature edges belong to none of A, B, C.
struct PruningSets {
  std::vector<EdgeRef> set_a;               ///< MA, negative curvature
  std::vector<EdgeRef> set_b;               ///< MA, positive curvature
  std::vector<EdgeRef> set_c;               ///< no MA, negative curvature
  std::vector<EdgeRef> unflagged_positive;  ///< no MA, positive curvature
  std::vector<EdgeRef> excluded_zero;       ///< zero curvature

  std::size_t size() const {
    return set_a.size() + set_b.size() + set_c.size() + unflagged_positive.size() + excluded_zero.size();
  }
};

enum class PruneTarget { A, B, C };

PruneTarget parse_prune_target(const std::string& s);
std::string prune_tag(PruneTarget t);  ///< "A", "B", "C"

/// Partition every structural edge. Each edge needs an MA entry in at
/// least one direction, and every graph must appear in both inputs.
PruningSets categorize(std::span<const MAReport> reports, std::span<const GraphCurvature> curvature);

std::span<const EdgeRef> target_set(const PruningSets& sets, PruneTarget target);

/// Delete the targeted edges (and their edge features) from each graph and
/// suffix graph ids with "_prune<tag>". A graph already carrying that suffix
/// is treated as pruned: its missing target edges are not an error, so
/// pruning is idempotent. Throws ValidationError for refs that resolve to
/// no graph or to a non-edge of an untagged graph.
std::vector<Graph> emit_pruned(std::span<const Graph> graphs, const PruningSets& sets, PruneTarget target);

enum class Variant { Baseline, PruneA, PruneB, PruneC };

Variant parse_variant(const std::string& s);
std::string variant_name(Variant v);  ///< "baseline", "prune_A", ...

struct EvalReport {
  Variant variant{Variant::Baseline};
  double loss{0.0};
  std::optional<std::vector<std::pair<std::string, double>>> per_graph;
};

struct DeltaRow {
  Variant variant{Variant::Baseline};
  double loss{0.0};
  double delta{0.0};
  std::optional<double> relative_error_pct;
};

struct DeltaTable {
  double baseline_loss{0.0};
  std::vector<DeltaRow> rows;
  std::vector<std::string> warnings;
};

/// Difference a - b carried out on the shortest round-trip decimal forms of
/// the operands, so report values such as 0.6224 - 0.51 give exactly the
/// double nearest 0.1124.
double decimal_difference(double a, double b);

/// Loss increase of each variant over the baseline, in absolute terms and
/// as a percentage of the baseline loss. The percentage is omitted, with a
/// warning, when the baseline loss is not positive.
DeltaTable delta_loss(const EvalReport& baseline, std::span<const EvalReport> variants);

}  // namespace curveprobe
