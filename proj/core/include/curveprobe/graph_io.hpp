#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "curveprobe/graph.hpp"

namespace curveprobe {

/// Parse one graph object. Throws ValidationError on schema violations.
Graph graph_from_json(const nlohmann::ordered_json& obj);
nlohmann::ordered_json graph_to_json(const Graph& g);

/// Read a JSON Lines graph file. Blank lines are skipped; errors carry the
/// 1-based line number.
std::vector<Graph> load_graphs(const std::filesystem::path& path);
std::vector<Graph> read_graphs(std::istream& in, const std::string& source_name = "<stream>");

/// One compact JSON object per line, fixed key order, canonical edges.
std::string dump_graphs(std::span<const Graph> graphs);

/// Parse every non-blank line of a JSON Lines file. Parse errors name the
/// file and line.
std::vector<nlohmann::ordered_json> read_json_lines(const std::filesystem::path& path);

}  // namespace curveprobe
