#include "curveprobe/activation_io.hpp"

#include <limits>

#include "curveprobe/graph_io.hpp"

namespace curveprobe {

using json = nlohmann::ordered_json;

namespace {

template <typename T>
T get_index(const json& obj, const char* key, const std::string& ctx) {
  if (!obj.contains(key)) throw ValidationError(ctx + ": missing key '" + key + "'");
  const json& v = obj[key];
  if (!v.is_number_integer() || v.get<std::int64_t>() < 0 ||
      v.get<std::uint64_t>() > std::numeric_limits<T>::max()) {
    throw ValidationError(ctx + ": '" + key + "' must be a non-negative integer");
  }
  return v.get<T>();
}

std::string get_string(const json& obj, const char* key, const std::string& ctx, bool required = true) {
  if (!obj.contains(key)) {
    if (required) throw ValidationError(ctx + ": missing key '" + key + "'");
    return {};
  }
  if (!obj[key].is_string()) throw ValidationError(ctx + ": '" + key + "' must be a string");
  return obj[key].get<std::string>();
}

}  // namespace

ActivationLog log_from_json(const json& obj) {
  if (!obj.is_object()) throw ValidationError("activation log must be a JSON object");
  ActivationLog log;
  log.graph_id = get_string(obj, "graph_id", "activation log");
  const std::string ctx = "activation log '" + log.graph_id + "'";
  log.model = get_string(obj, "model", ctx, false);
  if (!obj.contains("records") || !obj["records"].is_array()) {
    throw ValidationError(ctx + ": missing array 'records'");
  }
  log.records.reserve(obj["records"].size());
  for (const auto& r : obj["records"]) {
    if (!r.is_object()) throw ValidationError(ctx + ": record must be an object");
    AttentionRecord rec;
    rec.layer = get_index<std::uint32_t>(r, "layer", ctx);
    rec.head = r.contains("head") ? get_index<std::uint32_t>(r, "head", ctx) : 0u;
    rec.src = get_index<NodeId>(r, "src", ctx);
    rec.dst = get_index<NodeId>(r, "dst", ctx);
    if (!r.contains("weight") || !r["weight"].is_number()) {
      throw ValidationError(ctx + ": record weight must be numeric");
    }
    rec.weight = r["weight"].get<double>();
    log.records.push_back(rec);
  }
  validate_log(log);
  return log;
}

json log_to_json(const ActivationLog& log) {
  json out = json::object();
  out["graph_id"] = log.graph_id;
  out["model"] = log.model;
  json recs = json::array();
  for (const auto& r : log.records) {
    json o = json::object();
    o["layer"] = r.layer;
    o["head"] = r.head;
    o["src"] = r.src;
    o["dst"] = r.dst;
    o["weight"] = r.weight;
    recs.push_back(std::move(o));
  }
  out["records"] = std::move(recs);
  return out;
}

std::vector<ActivationLog> load_logs(const std::filesystem::path& path) {
  std::vector<ActivationLog> logs;
  for (const auto& row : read_json_lines(path)) {
    try {
      logs.push_back(log_from_json(row));
    } catch (const ValidationError& e) {
      throw ValidationError(path.string() + ": " + e.what());
    }
  }
  return logs;
}

json report_to_json(const MAReport& report) {
  json out = json::object();
  out["graph_id"] = report.graph_id;
  out["model"] = report.model;
  out["threshold_percentile"] = report.threshold_percentile;
  out["cutoff"] = report.cutoff;
  json entries = json::array();
  for (const auto& e : report.entries) {
    json o = json::object();
    o["src"] = e.src;
    o["dst"] = e.dst;
    o["max_ratio"] = e.max_ratio;
    o["argmax_layer"] = e.argmax_layer;
    o["argmax_head"] = e.argmax_head;
    o["flagged"] = e.flagged;
    if (e.hop) o["hop"] = *e.hop == kUnreachable ? json(nullptr) : json(*e.hop);
    if (e.hop || e.bfc) o["bfc"] = e.bfc ? json(*e.bfc) : json(nullptr);
    entries.push_back(std::move(o));
  }
  out["entries"] = std::move(entries);
  return out;
}

MAReport report_from_json(const json& obj) {
  if (!obj.is_object()) throw ValidationError("MA report must be a JSON object");
  MAReport rep;
  rep.graph_id = get_string(obj, "graph_id", "MA report");
  const std::string ctx = "MA report '" + rep.graph_id + "'";
  rep.model = get_string(obj, "model", ctx, false);
  if (obj.contains("threshold_percentile")) rep.threshold_percentile = obj["threshold_percentile"].get<double>();
  if (obj.contains("cutoff")) rep.cutoff = obj["cutoff"].get<double>();
  if (!obj.contains("entries") || !obj["entries"].is_array()) {
    throw ValidationError(ctx + ": missing array 'entries'");
  }
  for (const auto& o : obj["entries"]) {
    MAEntry e;
    e.src = get_index<NodeId>(o, "src", ctx);
    e.dst = get_index<NodeId>(o, "dst", ctx);
    if (!o.contains("max_ratio") || !o["max_ratio"].is_number()) {
      throw ValidationError(ctx + ": entry max_ratio must be numeric");
    }
    e.max_ratio = o["max_ratio"].get<double>();
    e.argmax_layer = o.contains("argmax_layer") ? get_index<std::uint32_t>(o, "argmax_layer", ctx) : 0u;
    e.argmax_head = o.contains("argmax_head") ? get_index<std::uint32_t>(o, "argmax_head", ctx) : 0u;
    if (!o.contains("flagged") || !o["flagged"].is_boolean()) {
      throw ValidationError(ctx + ": entry 'flagged' must be a boolean");
    }
    e.flagged = o["flagged"].get<bool>();
    if (o.contains("hop")) e.hop = o["hop"].is_null() ? kUnreachable : o["hop"].get<std::size_t>();
    if (o.contains("bfc") && !o["bfc"].is_null()) e.bfc = o["bfc"].get<double>();
    rep.entries.push_back(e);
  }
  return rep;
}

std::vector<MAReport> load_reports(const std::filesystem::path& path) {
  std::vector<MAReport> reps;
  for (const auto& row : read_json_lines(path)) {
    try {
      reps.push_back(report_from_json(row));
    } catch (const ValidationError& e) {
      throw ValidationError(path.string() + ": " + e.what());
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError(path.string() + ": " + e.what());
    }
  }
  return reps;
}

}  // namespace curveprobe
