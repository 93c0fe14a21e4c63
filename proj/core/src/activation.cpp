#include "curveprobe/activation.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <tuple>
#include <unordered_map>

#include "curveprobe/curvature.hpp"

namespace curveprobe {

namespace {

auto record_key(const AttentionRecord& r) { return std::tuple(r.layer, r.head, r.src, r.dst); }

double median_of(std::vector<double> v) {
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  const double upper = v[mid];
  if (v.size() % 2 == 1) return upper;
  const double lower = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

}  // namespace

void validate_log(const ActivationLog& log) {
  std::vector<std::tuple<std::uint32_t, std::uint32_t, NodeId, NodeId>> keys;
  keys.reserve(log.records.size());
  for (const auto& r : log.records) {
    if (!std::isfinite(r.weight) || r.weight < 0.0) {
      std::ostringstream os;
      os << "log '" << log.graph_id << "': weight " << r.weight << " at (layer " << r.layer << ", head "
         << r.head << ", " << r.src << " -> " << r.dst << ") must be finite and non-negative";
      throw ValidationError(os.str());
    }
    keys.push_back(record_key(r));
  }
  std::sort(keys.begin(), keys.end());
  auto dup = std::adjacent_find(keys.begin(), keys.end());
  if (dup != keys.end()) {
    std::ostringstream os;
    os << "log '" << log.graph_id << "': duplicate record (layer " << std::get<0>(*dup) << ", head "
       << std::get<1>(*dup) << ", " << std::get<2>(*dup) << " -> " << std::get<3>(*dup) << ")";
    throw ValidationError(os.str());
  }
}

std::vector<RatioRecord> activation_ratios(const ActivationLog& log, MedianScope scope) {
  validate_log(log);
  std::vector<AttentionRecord> sorted = log.records;
  std::sort(sorted.begin(), sorted.end(),
            [](const auto& a, const auto& b) { return record_key(a) < record_key(b); });

  auto group_of = [scope](const AttentionRecord& r) {
    return std::pair(r.layer, scope == MedianScope::LayerHead ? r.head : 0u);
  };
  std::map<std::pair<std::uint32_t, std::uint32_t>, std::vector<double>> groups;
  for (const auto& r : sorted) groups[group_of(r)].push_back(std::fabs(r.weight));

  std::map<std::pair<std::uint32_t, std::uint32_t>, double> medians;
  for (auto& [key, values] : groups) {
    const double m = median_of(std::move(values));
    if (!(m >= kDegenerateEpsilon)) {
      std::ostringstream os;
      os << "log '" << log.graph_id << "': degenerate normalization group (layer " << key.first;
      if (scope == MedianScope::LayerHead) os << ", head " << key.second;
      os << "): median |weight| " << m << " is below " << kDegenerateEpsilon;
      throw DegenerateGroupError(os.str());
    }
    medians[key] = m;
  }

  std::vector<RatioRecord> out;
  out.reserve(sorted.size());
  for (const auto& r : sorted) {
    out.push_back(RatioRecord{r.layer, r.head, r.src, r.dst, std::fabs(r.weight) / medians[group_of(r)]});
  }
  return out;
}

double percentile_cutoff(std::vector<double> values, double percentile) {
  if (values.empty()) throw ValidationError("percentile cutoff of an empty collection");
  if (!(percentile > 0.0 && percentile < 100.0)) {
    throw ValidationError("percentile must lie in (0, 100)");
  }
  const double n = static_cast<double>(values.size());
  // Guard against 0.05 * N landing a hair above an integer.
  auto top = static_cast<std::size_t>(std::ceil((100.0 - percentile) * n / 100.0 - 1e-9));
  top = std::clamp<std::size_t>(top, 1, values.size());
  std::sort(values.begin(), values.end(), std::greater<>());
  return values[top - 1];
}

std::vector<MAReport> flag_massive(std::span<const GraphRatios> dataset, double percentile,
                                   CutoffScope scope) {
  if (!(percentile > 0.0 && percentile < 100.0)) {
    throw ValidationError("percentile must lie in (0, 100)");
  }
  std::vector<MAReport> reports;
  reports.reserve(dataset.size());
  std::size_t total_pairs = 0;
  for (const auto& gr : dataset) {
    MAReport rep;
    rep.graph_id = gr.graph_id;
    rep.model = gr.model;
    rep.threshold_percentile = percentile;

    std::map<std::pair<NodeId, NodeId>, MAEntry> pairs;
    std::vector<RatioRecord> ordered = gr.ratios;
    std::sort(ordered.begin(), ordered.end(), [](const auto& a, const auto& b) {
      return std::tie(a.layer, a.head, a.src, a.dst) < std::tie(b.layer, b.head, b.src, b.dst);
    });
    for (const auto& r : ordered) {
      auto [it, inserted] = pairs.try_emplace({r.src, r.dst});
      MAEntry& e = it->second;
      if (inserted || r.ratio > e.max_ratio) {
        e.src = r.src;
        e.dst = r.dst;
        e.max_ratio = r.ratio;
        e.argmax_layer = r.layer;
        e.argmax_head = r.head;
      }
    }
    for (auto& [_, e] : pairs) rep.entries.push_back(e);
    total_pairs += rep.entries.size();
    reports.push_back(std::move(rep));
  }
  if (total_pairs == 0) throw ValidationError("flag_massive: no attention pairs in the input");

  auto apply = [](MAReport& rep, double cutoff) {
    rep.cutoff = cutoff;
    for (auto& e : rep.entries) e.flagged = e.max_ratio >= cutoff;
  };
  if (scope == CutoffScope::Dataset) {
    std::vector<double> maxima;
    maxima.reserve(total_pairs);
    for (const auto& rep : reports)
      for (const auto& e : rep.entries) maxima.push_back(e.max_ratio);
    const double cutoff = percentile_cutoff(std::move(maxima), percentile);
    for (auto& rep : reports) apply(rep, cutoff);
  } else {
    for (auto& rep : reports) {
      if (rep.entries.empty()) {
        throw ValidationError("flag_massive: graph '" + rep.graph_id + "' has no attention pairs");
      }
      std::vector<double> maxima;
      for (const auto& e : rep.entries) maxima.push_back(e.max_ratio);
      apply(rep, percentile_cutoff(std::move(maxima), percentile));
    }
  }
  return reports;
}

void annotate_report(MAReport& report, const Graph& g) {
  if (report.graph_id != g.id()) {
    throw ValidationError("annotate_report: report '" + report.graph_id + "' does not match graph '" +
                          g.id() + "'");
  }
  const auto curv = bfc_all(g);
  std::unordered_map<NodeId, std::vector<std::size_t>> bfs_cache;
  for (auto& e : report.entries) {
    if (e.src >= g.num_nodes() || e.dst >= g.num_nodes()) {
      std::ostringstream os;
      os << "graph '" << g.id() << "': attention pair (" << e.src << ", " << e.dst
         << ") references a node outside the graph";
      throw ValidationError(os.str());
    }
    auto it = bfs_cache.find(e.src);
    if (it == bfs_cache.end()) it = bfs_cache.emplace(e.src, hop_distances_from(g, e.src)).first;
    e.hop = it->second[e.dst];
    if (auto idx = g.edge_index(e.src, e.dst)) {
      e.bfc = curv[*idx].bfc;
    } else {
      e.bfc.reset();
    }
  }
}

std::size_t HopHistogram::total() const {
  std::size_t n = unreachable;
  for (const auto& [_, c] : by_hop) n += c;
  return n;
}

HopHistogram ma_hop_lengths(std::span<const MAReport> reports, std::span<const Graph> graphs) {
  std::unordered_map<std::string, const Graph*> by_id;
  for (const auto& g : graphs) by_id.emplace(g.id(), &g);
  HopHistogram hist;
  for (const auto& rep : reports) {
    auto it = by_id.find(rep.graph_id);
    if (it == by_id.end()) throw ValidationError("ma_hop_lengths: graph '" + rep.graph_id + "' not found");
    const Graph& g = *it->second;
    std::unordered_map<NodeId, std::vector<std::size_t>> bfs_cache;
    for (const auto& e : rep.entries) {
      if (!e.flagged) continue;
      auto ct = bfs_cache.find(e.src);
      if (ct == bfs_cache.end()) ct = bfs_cache.emplace(e.src, hop_distances_from(g, e.src)).first;
      if (e.dst >= g.num_nodes()) throw ValidationError("ma_hop_lengths: pair outside graph '" + g.id() + "'");
      const std::size_t hop = ct->second[e.dst];
      if (hop == kUnreachable) {
        ++hist.unreachable;
      } else {
        ++hist.by_hop[hop];
      }
    }
  }
  return hist;
}

std::vector<EntropyRecord> attention_entropy(const ActivationLog& log) {
  validate_log(log);
  std::map<std::tuple<std::uint32_t, std::uint32_t, NodeId>, std::vector<double>> rows;
  for (const auto& r : log.records) rows[{r.layer, r.head, r.src}].push_back(std::fabs(r.weight));
  std::vector<EntropyRecord> out;
  out.reserve(rows.size());
  for (const auto& [key, weights] : rows) {
    double sum = 0.0;
    for (double w : weights) sum += w;
    if (!(sum >= kDegenerateEpsilon)) {
      std::ostringstream os;
      os << "log '" << log.graph_id << "': attention row (layer " << std::get<0>(key) << ", head "
         << std::get<1>(key) << ", src " << std::get<2>(key) << ") has no mass";
      throw DegenerateGroupError(os.str());
    }
    double h = 0.0;
    for (double w : weights) {
      const double p = w / sum;
      if (p > 0.0) h -= p * std::log(p);
    }
    out.push_back(EntropyRecord{std::get<0>(key), std::get<1>(key), std::get<2>(key), std::max(h, 0.0)});
  }
  return out;
}

std::vector<bool> edge_ma_flags(const MAReport& report, std::span<const Edge> edges,
                                MissingPairPolicy policy) {
  std::map<Edge, std::pair<bool, bool>> seen;  // (logged, flagged) per undirected pair
  for (const auto& e : report.entries) {
    if (e.src == e.dst) continue;
    auto& s = seen[Edge::canonical(e.src, e.dst)];
    s.first = true;
    s.second = s.second || e.flagged;
  }
  std::vector<bool> flags;
  flags.reserve(edges.size());
  for (const auto& edge : edges) {
    auto it = seen.find(Edge::canonical(edge.u, edge.v));
    if (it == seen.end()) {
      if (policy == MissingPairPolicy::Error) {
        std::ostringstream os;
        os << "graph '" << report.graph_id << "': edge (" << edge.u << ", " << edge.v
           << ") has no massive-activation entry";
        throw ValidationError(os.str());
      }
      flags.push_back(false);
    } else {
      flags.push_back(it->second.second);
    }
  }
  return flags;
}

}  // namespace curveprobe
