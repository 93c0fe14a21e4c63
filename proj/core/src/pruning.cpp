#include "curveprobe/pruning.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

#include "curveprobe/errors.hpp"
#include "curveprobe/stats.hpp"

namespace curveprobe {

PruneTarget parse_prune_target(const std::string& s) {
  if (s == "A" || s == "a") return PruneTarget::A;
  if (s == "B" || s == "b") return PruneTarget::B;
  if (s == "C" || s == "c") return PruneTarget::C;
  throw ValidationError("unknown pruning set '" + s + "' (expected A, B or C)");
}

std::string prune_tag(PruneTarget t) {
  switch (t) {
    case PruneTarget::A: return "A";
    case PruneTarget::B: return "B";
    case PruneTarget::C: return "C";
  }
  return "?";
}

PruningSets categorize(std::span<const MAReport> reports, std::span<const GraphCurvature> curvature) {
  std::unordered_map<std::string, const MAReport*> by_id;
  for (const auto& r : reports) {
    if (!by_id.emplace(r.graph_id, &r).second) {
      throw ValidationError("categorize: duplicate MA report for graph '" + r.graph_id + "'");
    }
  }
  std::set<std::string> curv_ids;
  for (const auto& gc : curvature) curv_ids.insert(gc.graph_id);
  for (const auto& r : reports) {
    if (!curv_ids.contains(r.graph_id)) {
      throw ValidationError("categorize: graph '" + r.graph_id + "' has an MA report but no curvature record");
    }
  }

  const Binning zero_key = Binning::exact();
  PruningSets sets;
  for (const auto& gc : curvature) {
    if (gc.edges.size() != gc.bfc.size()) {
      throw ValidationError("categorize: graph '" + gc.graph_id + "' has mismatched edges and curvature");
    }
    auto it = by_id.find(gc.graph_id);
    if (it == by_id.end()) {
      throw ValidationError("categorize: graph '" + gc.graph_id + "' has curvature but no MA report");
    }
    const MAReport& rep = *it->second;
    // An entry annotated as structural must be an edge of the curvature record.
    std::set<Edge> edge_set(gc.edges.begin(), gc.edges.end());
    for (const auto& e : rep.entries) {
      if (e.bfc && e.src != e.dst && !edge_set.contains(Edge::canonical(e.src, e.dst))) {
        std::ostringstream os;
        os << "categorize: graph '" << gc.graph_id << "': structural pair (" << e.src << ", " << e.dst
           << ") is missing from the curvature record";
        throw ValidationError(os.str());
      }
    }
    const auto flags = edge_ma_flags(rep, gc.edges, MissingPairPolicy::Error);
    for (std::size_t k = 0; k < gc.edges.size(); ++k) {
      EdgeRef ref{gc.graph_id, Edge::canonical(gc.edges[k].u, gc.edges[k].v)};
      const std::int64_t key = zero_key.key(gc.bfc[k]);
      if (key == 0) {
        sets.excluded_zero.push_back(std::move(ref));
      } else if (key < 0) {
        (flags[k] ? sets.set_a : sets.set_c).push_back(std::move(ref));
      } else {
        (flags[k] ? sets.set_b : sets.unflagged_positive).push_back(std::move(ref));
      }
    }
  }
  return sets;
}

std::span<const EdgeRef> target_set(const PruningSets& sets, PruneTarget target) {
  switch (target) {
    case PruneTarget::A: return sets.set_a;
    case PruneTarget::B: return sets.set_b;
    case PruneTarget::C: return sets.set_c;
  }
  return {};
}

std::vector<Graph> emit_pruned(std::span<const Graph> graphs, const PruningSets& sets, PruneTarget target) {
  const std::string suffix = "_prune" + prune_tag(target);
  auto base_id = [&](const std::string& id) {
    if (id.size() >= suffix.size() && id.compare(id.size() - suffix.size(), suffix.size(), suffix) == 0) {
      return std::pair(id.substr(0, id.size() - suffix.size()), true);
    }
    return std::pair(id, false);
  };

  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t k = 0; k < graphs.size(); ++k) index.emplace(base_id(graphs[k].id()).first, k);

  std::vector<std::vector<Edge>> removal(graphs.size());
  for (const auto& ref : target_set(sets, target)) {
    auto it = index.find(base_id(ref.graph_id).first);
    if (it == index.end()) {
      throw ValidationError("emit_pruned: edge reference to unknown graph '" + ref.graph_id + "'");
    }
    const Graph& g = graphs[it->second];
    const bool already_pruned = base_id(g.id()).second;
    if (!g.has_edge(ref.endpoints.u, ref.endpoints.v)) {
      if (already_pruned) continue;
      std::ostringstream os;
      os << "emit_pruned: (" << ref.endpoints.u << ", " << ref.endpoints.v << ") is not an edge of graph '"
         << g.id() << "'";
      throw ValidationError(os.str());
    }
    removal[it->second].push_back(ref.endpoints);
  }

  std::vector<Graph> out;
  out.reserve(graphs.size());
  for (std::size_t k = 0; k < graphs.size(); ++k) {
    const auto [base, tagged] = base_id(graphs[k].id());
    out.push_back(graphs[k].without_edges(removal[k], tagged ? graphs[k].id() : base + suffix));
  }
  return out;
}

Variant parse_variant(const std::string& s) {
  if (s == "baseline") return Variant::Baseline;
  if (s == "prune_A") return Variant::PruneA;
  if (s == "prune_B") return Variant::PruneB;
  if (s == "prune_C") return Variant::PruneC;
  throw ValidationError("unknown evaluation variant '" + s + "'");
}

std::string variant_name(Variant v) {
  switch (v) {
    case Variant::Baseline: return "baseline";
    case Variant::PruneA: return "prune_A";
    case Variant::PruneB: return "prune_B";
    case Variant::PruneC: return "prune_C";
  }
  return "?";
}

namespace {

__extension__ typedef __int128 int128;

struct Decimal {
  int128 mantissa{0};
  int exponent{0};  // value = mantissa * 10^exponent
};

std::optional<Decimal> to_decimal(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::scientific);
  if (res.ec != std::errc()) return std::nullopt;
  std::string_view s(buf, static_cast<std::size_t>(res.ptr - buf));
  Decimal d;
  bool negative = false;
  std::size_t pos = 0;
  if (s[pos] == '-') {
    negative = true;
    ++pos;
  }
  int frac_digits = 0;
  bool after_point = false;
  for (; pos < s.size() && s[pos] != 'e'; ++pos) {
    if (s[pos] == '.') {
      after_point = true;
      continue;
    }
    d.mantissa = d.mantissa * 10 + (s[pos] - '0');
    if (after_point) ++frac_digits;
  }
  int exp10 = 0;
  if (pos < s.size()) {
    std::string_view e = s.substr(pos + 1);
    if (!e.empty() && e.front() == '+') e.remove_prefix(1);
    std::from_chars(e.data(), e.data() + e.size(), exp10);
  }
  d.exponent = exp10 - frac_digits;
  if (negative) d.mantissa = -d.mantissa;
  return d;
}

}  // namespace

double decimal_difference(double a, double b) {
  if (!std::isfinite(a) || !std::isfinite(b)) return a - b;
  auto da = to_decimal(a);
  auto db = to_decimal(b);
  if (!da || !db) return a - b;
  const int exp = std::min(da->exponent, db->exponent);
  const int shift_a = da->exponent - exp;
  const int shift_b = db->exponent - exp;
  if (shift_a > 20 || shift_b > 20) return a - b;
  auto scale = [](int128 m, int shift) {
    while (shift-- > 0) m *= 10;
    return m;
  };
  int128 diff = scale(da->mantissa, shift_a) - scale(db->mantissa, shift_b);
  if (diff == 0) return 0.0;
  const bool negative = diff < 0;
  if (negative) diff = -diff;
  std::string digits;
  while (diff > 0) {
    digits.insert(digits.begin(), static_cast<char>('0' + static_cast<int>(diff % 10)));
    diff /= 10;
  }
  const std::string text = (negative ? "-" : "") + digits + "e" + std::to_string(exp);
  double out = 0.0;
  auto res = std::from_chars(text.data(), text.data() + text.size(), out);
  if (res.ec != std::errc()) return a - b;
  return out;
}

DeltaTable delta_loss(const EvalReport& baseline, std::span<const EvalReport> variants) {
  if (baseline.variant != Variant::Baseline) {
    throw ValidationError("delta_loss: baseline report has variant '" + variant_name(baseline.variant) + "'");
  }
  if (!std::isfinite(baseline.loss)) throw ValidationError("delta_loss: baseline loss is not finite");
  DeltaTable t;
  t.baseline_loss = baseline.loss;
  const bool relative_ok = baseline.loss > 0.0;
  if (!relative_ok) {
    t.warnings.push_back("baseline loss is not positive; relative error omitted");
  }
  for (const auto& v : variants) {
    if (!std::isfinite(v.loss)) {
      throw ValidationError("delta_loss: loss of variant '" + variant_name(v.variant) + "' is not finite");
    }
    DeltaRow row;
    row.variant = v.variant;
    row.loss = v.loss;
    row.delta = decimal_difference(v.loss, baseline.loss);
    if (relative_ok) row.relative_error_pct = row.delta / baseline.loss * 100.0;
    t.rows.push_back(row);
  }
  return t;
}

}  // namespace curveprobe
