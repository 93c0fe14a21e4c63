#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include <nlohmann/json.hpp>

#include "curveprobe/activation.hpp"
#include "curveprobe/collapse.hpp"
#include "curveprobe/curvature.hpp"
#include "curveprobe/pruning.hpp"
#include "curveprobe/stats.hpp"

namespace curveprobe {

using ordered_json = nlohmann::ordered_json;

/// {graph_id, edges, bfc, weighted_mean, negative_fraction}; the summary
/// fields are null for an edgeless graph.
ordered_json curvature_record_to_json(const GraphCurvature& gc);
GraphCurvature curvature_record_from_json(const ordered_json& obj);
std::vector<GraphCurvature> load_curvature(const std::filesystem::path& path);

ordered_json summary_to_json(const CurvatureSummary& s);
ordered_json collapse_to_json(const CollapseReport& r);

ordered_json enrichment_to_json(const EnrichmentTable& t);
ordered_json layer_evolution_to_json(std::span<const LayerEvolutionRow> rows);
ordered_json hop_histogram_to_json(const HopHistogram& h);

EvalReport eval_report_from_json(const ordered_json& obj);
ordered_json eval_report_to_json(const EvalReport& r);
EvalReport load_eval_report(const std::filesystem::path& path);
ordered_json delta_table_to_json(const DeltaTable& t);

ordered_json pruning_sets_to_json(const PruningSets& s);

}  // namespace curveprobe
