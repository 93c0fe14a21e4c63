#include "curveprobe/graph_io.hpp"

#include <fstream>
#include <limits>
#include <sstream>

#include "curveprobe/errors.hpp"

namespace curveprobe {

using json = nlohmann::ordered_json;

namespace {

[[noreturn]] void fail(const std::string& gid, const std::string& msg) {
  throw ValidationError("graph '" + gid + "': " + msg);
}

std::uint64_t as_index(const json& v, const std::string& gid, const char* what) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer() && v.get<std::int64_t>() >= 0) return v.get<std::uint64_t>();
  fail(gid, std::string(what) + " must be a non-negative integer, got " + v.dump());
}

NodeId as_node(const json& v, const std::string& gid, const char* what) {
  auto x = as_index(v, gid, what);
  if (x > std::numeric_limits<NodeId>::max()) fail(gid, std::string(what) + " too large");
  return static_cast<NodeId>(x);
}

double as_real(const json& v, const std::string& gid, const char* what) {
  if (!v.is_number()) fail(gid, std::string(what) + " must be numeric, got " + v.dump());
  return v.get<double>();
}

json real_to_json(double x) {
  // Integral doubles stay doubles so the file round-trips byte-for-byte.
  return json(x);
}

}  // namespace

Graph graph_from_json(const json& obj) {
  if (!obj.is_object()) throw ValidationError("graph record must be a JSON object");
  if (!obj.contains("graph_id") || !obj["graph_id"].is_string()) {
    throw ValidationError("graph record is missing string key 'graph_id'");
  }
  GraphData d;
  d.graph_id = obj["graph_id"].get<std::string>();
  const auto& gid = d.graph_id;
  if (!obj.contains("num_nodes")) fail(gid, "missing key 'num_nodes'");
  d.num_nodes = as_index(obj["num_nodes"], gid, "num_nodes");
  if (!obj.contains("edges") || !obj["edges"].is_array()) fail(gid, "missing array 'edges'");
  for (const auto& e : obj["edges"]) {
    if (!e.is_array() || e.size() != 2) fail(gid, "edge must be a pair [i, j], got " + e.dump());
    d.edges.push_back(Edge{as_node(e[0], gid, "edge endpoint"), as_node(e[1], gid, "edge endpoint")});
  }

  for (auto it = obj.begin(); it != obj.end(); ++it) {
    const std::string& key = it.key();
    const json& val = it.value();
    if (key == "graph_id" || key == "num_nodes" || key == "edges") continue;
    if (key == "node_features") {
      if (!val.is_array()) fail(gid, "node_features must be an array of rows");
      FeatureMatrix fm;
      fm.rows = val.size();
      fm.cols = val.empty() ? 0 : val[0].size();
      for (const auto& row : val) {
        if (!row.is_array() || row.size() != fm.cols) {
          fail(gid, "node_features rows must be arrays of equal length");
        }
        for (const auto& x : row) fm.values.push_back(as_real(x, gid, "node feature"));
      }
      d.node_features = std::move(fm);
    } else if (key == "edge_features") {
      if (!val.is_array()) fail(gid, "edge_features must be an array of integers");
      std::vector<std::int64_t> ef;
      for (const auto& x : val) {
        if (!x.is_number_integer()) fail(gid, "edge_features entries must be integers");
        ef.push_back(x.get<std::int64_t>());
      }
      d.edge_features = std::move(ef);
    } else if (key == "roles") {
      if (!val.is_object()) fail(gid, "roles must be an object");
      Roles r;
      for (auto rt = val.begin(); rt != val.end(); ++rt) {
        if (rt.key() == "source") {
          r.source = as_node(rt.value(), gid, "roles.source");
        } else if (rt.key() == "target") {
          r.target = as_node(rt.value(), gid, "roles.target");
        } else if (rt.key() == "dummy_sources") {
          if (!rt.value().is_array()) fail(gid, "roles.dummy_sources must be an array");
          for (const auto& x : rt.value()) r.dummy_sources.push_back(as_node(x, gid, "dummy source"));
        } else {
          r.extra[rt.key()] = rt.value();
        }
      }
      d.roles = std::move(r);
    } else if (key == "y") {
      if (!val.is_array()) fail(gid, "y must be an array of numbers");
      std::vector<double> y;
      for (const auto& x : val) y.push_back(as_real(x, gid, "y entry"));
      d.target_value = std::move(y);
    } else {
      d.extra[key] = val;
    }
  }
  return Graph(std::move(d));
}

json graph_to_json(const Graph& g) {
  json out = json::object();
  out["graph_id"] = g.id();
  out["num_nodes"] = g.num_nodes();
  json edges = json::array();
  for (const auto& e : g.edges()) edges.push_back(json::array({e.u, e.v}));
  out["edges"] = std::move(edges);
  if (const auto& nf = g.node_features()) {
    json rows = json::array();
    for (std::size_t r = 0; r < nf->rows; ++r) {
      json row = json::array();
      for (double x : nf->row(r)) row.push_back(real_to_json(x));
      rows.push_back(std::move(row));
    }
    out["node_features"] = std::move(rows);
  }
  if (const auto& ef = g.edge_features()) out["edge_features"] = *ef;
  if (const auto& roles = g.roles()) {
    json r = json::object();
    if (roles->source) r["source"] = *roles->source;
    if (roles->target) r["target"] = *roles->target;
    if (!roles->dummy_sources.empty() || roles->source || roles->target) {
      r["dummy_sources"] = roles->dummy_sources;
    }
    for (auto it = roles->extra.begin(); it != roles->extra.end(); ++it) r[it.key()] = it.value();
    out["roles"] = std::move(r);
  }
  if (const auto& y = g.target_value()) {
    json arr = json::array();
    for (double x : *y) arr.push_back(real_to_json(x));
    out["y"] = std::move(arr);
  }
  for (auto it = g.extra().begin(); it != g.extra().end(); ++it) out[it.key()] = it.value();
  return out;
}

std::vector<json> read_json_lines(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open input file: " + path.string());
  std::vector<json> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      rows.push_back(json::parse(line));
    } catch (const json::parse_error& e) {
      std::ostringstream os;
      os << path.string() << ":" << lineno << ": malformed JSON: " << e.what();
      throw ValidationError(os.str());
    }
  }
  return rows;
}

std::vector<Graph> read_graphs(std::istream& in, const std::string& source_name) {
  std::vector<Graph> graphs;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      graphs.push_back(graph_from_json(json::parse(line)));
    } catch (const json::parse_error& e) {
      std::ostringstream os;
      os << source_name << ":" << lineno << ": malformed JSON: " << e.what();
      throw ValidationError(os.str());
    } catch (const ValidationError& e) {
      std::ostringstream os;
      os << source_name << ":" << lineno << ": " << e.what();
      throw ValidationError(os.str());
    }
  }
  return graphs;
}

std::vector<Graph> load_graphs(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open graph file: " + path.string());
  return read_graphs(in, path.string());
}

std::string dump_graphs(std::span<const Graph> graphs) {
  std::string out;
  for (const auto& g : graphs) {
    out += graph_to_json(g).dump();
    out += '\n';
  }
  return out;
}

}  // namespace curveprobe
