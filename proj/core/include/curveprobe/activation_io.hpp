#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "curveprobe/activation.hpp"

namespace curveprobe {

ActivationLog log_from_json(const nlohmann::ordered_json& obj);
nlohmann::ordered_json log_to_json(const ActivationLog& log);
std::vector<ActivationLog> load_logs(const std::filesystem::path& path);

MAReport report_from_json(const nlohmann::ordered_json& obj);
nlohmann::ordered_json report_to_json(const MAReport& report);
std::vector<MAReport> load_reports(const std::filesystem::path& path);

}  // namespace curveprobe
