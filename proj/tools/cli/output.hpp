#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace curveprobe::cli {

/// Write through a sibling temp file and rename into place. Parent
/// directories are created as needed.
void write_atomic(const std::filesystem::path& path, const std::string& content);

/// Lowercase hex SHA-256 of a file's bytes.
std::string sha256_file(const std::filesystem::path& path);

/// Path with its extension replaced, e.g. bfc.jsonl -> bfc.csv.
std::filesystem::path sibling(const std::filesystem::path& path, const std::string& extension);

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);
  void add_row(const std::vector<nlohmann::ordered_json>& cells);
  std::string str() const;

 private:
  std::size_t width_;
  std::string text_;
};

struct RunManifest {
  std::string command_line;
  nlohmann::ordered_json config = nlohmann::ordered_json::object();
  std::vector<std::filesystem::path> inputs;
  std::string tool_version;

  /// Digests are computed here; the timestamp is the only field that varies
  /// between identical runs.
  nlohmann::ordered_json to_json() const;
};

void write_manifest(const std::filesystem::path& dir, const RunManifest& manifest);

}  // namespace curveprobe::cli
