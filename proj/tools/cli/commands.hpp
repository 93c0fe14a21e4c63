#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "cli/output.hpp"

namespace curveprobe::cli {

struct Context {
  std::size_t jobs{1};
  std::uint64_t seed{7};
  RunManifest manifest;
  std::ostream* out{nullptr};
};

struct CurvatureOptions {
  std::string graphs;
  std::string out;
};

struct MaOptions {
  std::string logs;
  std::string graphs;
  std::string out;
  double percentile{95.0};
  std::string median_scope{"layer_head"};
  std::string cutoff_scope{"dataset"};
};

struct EnrichOptions {
  std::string ma;
  std::string bfc;
  std::string out;
  std::string binning{"exact"};
  double bin_width{0.25};
  std::string logs;
  std::string median_scope{"layer_head"};
};

struct CollapseOptions {
  std::string graphs;
  std::string logs;
  std::string out;
  double theta{1.0};
  std::string agg{"mean"};
  bool structural_only{false};
  std::string median_scope{"layer_head"};
  std::string laplacian{"normalized"};
  bool all_components{false};
};

struct SpectralOptionsCli {
  std::string graphs;
  std::string out;
  std::string laplacian{"normalized"};
  bool all_components{false};
};

struct PruneOptions {
  std::string graphs;
  std::string ma;
  std::string bfc;
  std::string set{"A"};
  std::string out;
};

struct DeltaLossOptions {
  std::string baseline;
  std::vector<std::string> variants;
  std::string out;
};

struct GenBarbellOptions {
  std::string variant{"standard"};
  std::string mode{"topological"};
  std::size_t n_train{256};
  std::size_t n_test{26};
  std::size_t clique_size{4};
  std::size_t feature_dim{16};
  std::string dummy_attach{"target"};
  std::string out_dir{"data"};
};

struct ReportOptions {
  std::string dir;
  std::string out;
};

void run_curvature(Context& ctx, const CurvatureOptions& o);
void run_ma(Context& ctx, const MaOptions& o);
void run_enrich(Context& ctx, const EnrichOptions& o);
void run_collapse(Context& ctx, const CollapseOptions& o);
void run_spectral(Context& ctx, const SpectralOptionsCli& o);
void run_prune(Context& ctx, const PruneOptions& o);
void run_delta_loss(Context& ctx, const DeltaLossOptions& o);
void run_gen_barbell(Context& ctx, const GenBarbellOptions& o);
void run_report(Context& ctx, const ReportOptions& o);

}  // namespace curveprobe::cli
