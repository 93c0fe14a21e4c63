#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "curveprobe/errors.hpp"
#include "curveprobe/graph.hpp"

namespace curveprobe {

inline constexpr double kDegenerateEpsilon = 1e-12;

struct AttentionRecord {
  std::uint32_t layer{0};
  std::uint32_t head{0};
  NodeId src{0};
  NodeId dst{0};
  double weight{0.0};
};

/// Raw post-softmax attention weights for one graph. Rows need not be
/// complete, and (src, dst) may be any pair of nodes, structural or not.
struct ActivationLog {
  std::string graph_id;
  std::string model;
  std::vector<AttentionRecord> records;
};

/// Throws ValidationError on duplicate (layer, head, src, dst) tuples or
/// negative / non-finite weights.
void validate_log(const ActivationLog& log);

/// Raised when the median of a normalization group (or the mass of an
/// attention row) is below kDegenerateEpsilon.
class DegenerateGroupError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

enum class MedianScope { Layer, LayerHead };

struct RatioRecord {
  std::uint32_t layer{0};
  std::uint32_t head{0};
  NodeId src{0};
  NodeId dst{0};
  double ratio{0.0};
};

/// |w| divided by the median |w| of its group; groups are (layer, head) or
/// (layer) depending on scope. Output is sorted by (layer, head, src, dst).
std::vector<RatioRecord> activation_ratios(const ActivationLog& log,
                                           MedianScope scope = MedianScope::LayerHead);

struct GraphRatios {
  std::string graph_id;
  std::string model;
  std::vector<RatioRecord> ratios;
};

struct MAEntry {
  NodeId src{0};
  NodeId dst{0};
  double max_ratio{0.0};
  std::uint32_t argmax_layer{0};
  std::uint32_t argmax_head{0};
  bool flagged{false};
  /// Filled by annotate_report; kUnreachable for disconnected pairs.
  std::optional<std::size_t> hop;
  /// Curvature when (src, dst) is a structural edge; filled by annotate_report.
  std::optional<double> bfc;
};

struct MAReport {
  std::string graph_id;
  std::string model;
  double threshold_percentile{95.0};
  double cutoff{0.0};
  std::vector<MAEntry> entries;  ///< sorted by (src, dst)
};

enum class CutoffScope { Dataset, Graph };

/// Cutoff of the top ceil((100 - p)/100 * N) values (at least one): the
/// value at that rank from the top of the sorted list. Flagging is
/// inclusive (>= cutoff), so ties at the cutoff are all flagged.
double percentile_cutoff(std::vector<double> values, double percentile);

/// Max ratio per directed pair over all layers and heads, then a single
/// percentile cutoff over the per-pair maxima of the whole dataset (or of
/// each graph with CutoffScope::Graph).
std::vector<MAReport> flag_massive(std::span<const GraphRatios> dataset, double percentile = 95.0,
                                   CutoffScope scope = CutoffScope::Dataset);

/// Attach hop distance and structural-edge curvature to every entry.
void annotate_report(MAReport& report, const Graph& g);

struct HopHistogram {
  std::map<std::size_t, std::size_t> by_hop;
  std::size_t unreachable{0};

  std::size_t total() const;
  friend bool operator==(const HopHistogram&, const HopHistogram&) = default;
};

/// Hop-length histogram over flagged entries only. Throws ValidationError
/// if a report names a graph that is not supplied.
HopHistogram ma_hop_lengths(std::span<const MAReport> reports, std::span<const Graph> graphs);

struct EntropyRecord {
  std::uint32_t layer{0};
  std::uint32_t head{0};
  NodeId src{0};
  double entropy{0.0};  ///< nats
};

/// Shannon entropy of each (layer, head, src) attention row after
/// renormalizing over the logged destinations.
std::vector<EntropyRecord> attention_entropy(const ActivationLog& log);

enum class MissingPairPolicy { Unflagged, Error };

/// An undirected edge is massively activated when either attention
/// direction is flagged. Edges with no entry in either direction are
/// unflagged, or rejected under MissingPairPolicy::Error.
std::vector<bool> edge_ma_flags(const MAReport& report, std::span<const Edge> edges,
                                MissingPairPolicy policy = MissingPairPolicy::Unflagged);

}  // namespace curveprobe
