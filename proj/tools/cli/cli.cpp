#include "cli/cli.hpp"

#include <algorithm>
#include <fstream>
#include <ostream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "cli/commands.hpp"
#include "curveprobe/errors.hpp"
#include "curveprobe/parallel.hpp"

namespace curveprobe::cli {

namespace {

using json = nlohmann::ordered_json;

bool has_flag(const std::vector<std::string>& args, const std::string& flag) {
  for (const auto& a : args) {
    if (a == flag || a.rfind(flag + "=", 0) == 0) return true;
  }
  return false;
}

std::string config_path(const std::vector<std::string>& args) {
  for (std::size_t i = 1; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) return args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) return args[i].substr(9);
  }
  return {};
}

void append_value(std::vector<std::string>& args, const std::string& flag, const json& v) {
  if (v.is_boolean()) {
    if (v.get<bool>()) args.push_back(flag);
    return;
  }
  args.push_back(flag);
  auto text = [](const json& x) { return x.is_string() ? x.get<std::string>() : x.dump(); };
  if (v.is_array()) {
    for (const auto& x : v) args.push_back(text(x));
  } else {
    args.push_back(text(v));
  }
}

/// Fold a JSON config file into the argument list. Keys name long flags
/// (underscores allowed); an object keyed by a subcommand name scopes its
/// members to that subcommand. Flags given on the command line win.
std::vector<std::string> expand_config(const std::vector<std::string>& args, CLI::App& app) {
  const std::string path = config_path(args);
  if (path.empty()) return args;
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config file: " + path);
  json cfg;
  try {
    cfg = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError(path + ": malformed JSON config: " + e.what());
  }
  if (!cfg.is_object()) throw ValidationError(path + ": config must be a JSON object");

  CLI::App* sub = nullptr;
  for (std::size_t i = 1; i < args.size() && !sub; ++i) {
    for (CLI::App* s : app.get_subcommands({})) {
      if (s->get_name() == args[i]) sub = s;
    }
  }

  std::vector<std::string> out = args;
  auto apply = [&](CLI::App* scope, std::string key, const json& value) {
    std::replace(key.begin(), key.end(), '_', '-');
    const std::string flag = "--" + key;
    if (key == "config") return;
    if (!scope->get_option_no_throw(flag) && !(scope == sub && app.get_option_no_throw(flag))) {
      if (scope != &app || !sub || !sub->get_option_no_throw(flag)) {
        throw ValidationError(path + ": unknown config key '" + key + "'");
      }
    }
    if (!has_flag(args, flag)) append_value(out, flag, value);
  };
  for (auto it = cfg.begin(); it != cfg.end(); ++it) {
    if (it.value().is_object()) {
      bool known = false;
      for (CLI::App* s : app.get_subcommands({})) known = known || s->get_name() == it.key();
      if (!known) throw ValidationError(path + ": unknown config section '" + it.key() + "'");
      if (sub && sub->get_name() == it.key()) {
        for (auto m = it.value().begin(); m != it.value().end(); ++m) apply(sub, m.key(), m.value());
      }
    } else {
      apply(&app, it.key(), it.value());
    }
  }
  return out;
}

json option_snapshot(const CLI::App& app) {
  json snap = json::object();
  for (const CLI::Option* opt : app.get_options()) {
    std::string name = opt->get_single_name();
    if (name.empty() || name == "help" || name == "version" || name == "config") continue;
    if (opt->count() > 0) {
      const auto& results = opt->results();
      if (results.size() == 1) {
        snap[name] = results.front();
      } else {
        snap[name] = results;
      }
    } else {
      snap[name] = opt->get_default_str();
    }
  }
  return snap;
}

std::string join(const std::vector<std::string>& args) {
  std::string s;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i) s += ' ';
    s += args[i];
  }
  return s;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"curveprobe: curvature diagnostics for graph attention", "curveprobe"};
  app.set_version_flag("--version", CURVEPROBE_VERSION);
  app.option_defaults()->always_capture_default();
  app.fallthrough();
  app.require_subcommand(1);

  std::size_t jobs = default_jobs();
  std::uint64_t seed = 7;
  std::string config;
  app.add_option("--jobs", jobs, "Worker threads for per-graph work")->check(CLI::PositiveNumber);
  app.add_option("--seed", seed, "Master seed for generated data");
  app.add_option("--config", config, "JSON file mirroring command line flags");

  CurvatureOptions curv;
  auto* c_curv = app.add_subcommand("curvature", "Balanced Forman curvature of every edge");
  c_curv->add_option("--graphs", curv.graphs, "Graph JSON Lines file")->required();
  c_curv->add_option("--out", curv.out, "Output JSON Lines file")->required();

  MaOptions ma;
  auto* c_ma = app.add_subcommand("ma", "Flag massive activations in attention logs");
  c_ma->add_option("--logs", ma.logs, "Activation log JSON Lines file")->required();
  c_ma->add_option("--graphs", ma.graphs, "Graph JSON Lines file")->required();
  c_ma->add_option("--out", ma.out, "Output MA report JSON Lines file")->required();
  c_ma->add_option("--percentile", ma.percentile, "Flagging percentile in (0, 100)");
  c_ma->add_option("--median-scope", ma.median_scope)->check(CLI::IsMember({"layer", "layer_head"}));
  c_ma->add_option("--cutoff-scope", ma.cutoff_scope)->check(CLI::IsMember({"dataset", "graph"}));

  EnrichOptions en;
  auto* c_en = app.add_subcommand("enrich", "Curvature enrichment of massive activations");
  c_en->add_option("--ma", en.ma, "MA report file")->required();
  c_en->add_option("--bfc", en.bfc, "Curvature file")->required();
  c_en->add_option("--out", en.out, "Output JSON file")->required();
  c_en->add_option("--binning", en.binning)->check(CLI::IsMember({"exact", "width"}));
  c_en->add_option("--bin-width", en.bin_width, "Bin width for --binning width");
  c_en->add_option("--logs", en.logs, "Activation logs for layer-wise and entropy tables");
  c_en->add_option("--median-scope", en.median_scope)->check(CLI::IsMember({"layer", "layer_head"}));

  CollapseOptions co;
  auto* c_co = app.add_subcommand("collapse", "Static vs activation-graph curvature and spectral gap");
  c_co->add_option("--graphs", co.graphs, "Graph JSON Lines file")->required();
  c_co->add_option("--logs", co.logs, "Activation log JSON Lines file")->required();
  c_co->add_option("--out", co.out, "Output JSON Lines file")->required();
  c_co->add_option("--theta", co.theta, "Aggregate ratio cutoff for effective edges");
  c_co->add_option("--agg", co.agg)->check(CLI::IsMember({"mean", "max"}));
  c_co->add_flag("--structural-only", co.structural_only, "Ignore attention between non-adjacent nodes");
  c_co->add_option("--median-scope", co.median_scope)->check(CLI::IsMember({"layer", "layer_head"}));
  c_co->add_option("--laplacian", co.laplacian)->check(CLI::IsMember({"normalized", "unnormalized"}));
  c_co->add_flag("--all-components", co.all_components, "Analyze all components instead of the largest");

  SpectralOptionsCli sp;
  auto* c_sp = app.add_subcommand("spectral", "Laplacian spectral gap per graph");
  c_sp->add_option("--graphs", sp.graphs, "Graph JSON Lines file")->required();
  c_sp->add_option("--out", sp.out, "Output JSON Lines file")->required();
  c_sp->add_option("--laplacian", sp.laplacian)->check(CLI::IsMember({"normalized", "unnormalized"}));
  c_sp->add_flag("--all-components", sp.all_components, "Analyze all components instead of the largest");

  PruneOptions pr;
  auto* c_pr = app.add_subcommand("prune", "Remove a causal-pruning edge set from a dataset");
  c_pr->add_option("--graphs", pr.graphs, "Graph JSON Lines file")->required();
  c_pr->add_option("--ma", pr.ma, "MA report file")->required();
  c_pr->add_option("--bfc", pr.bfc, "Curvature file")->required();
  c_pr->add_option("--set", pr.set)->check(CLI::IsMember({"A", "B", "C"}));
  c_pr->add_option("--out", pr.out, "Output graph file")->required();

  DeltaLossOptions dl;
  auto* c_dl = app.add_subcommand("delta-loss", "Loss increase of pruned variants over baseline");
  c_dl->add_option("--baseline", dl.baseline, "Baseline evaluation report")->required();
  c_dl->add_option("--variants", dl.variants, "Variant evaluation reports")->required();
  c_dl->add_option("--out", dl.out, "Output JSON file")->required();

  GenBarbellOptions gb;
  auto* c_gb = app.add_subcommand("gen-barbell", "Generate barbell benchmark datasets");
  c_gb->add_option("--variant", gb.variant)->check(CLI::IsMember({"standard", "modified", "extended"}));
  c_gb->add_option("--mode", gb.mode)->check(CLI::IsMember({"topological", "permuted"}));
  c_gb->add_option("--n-train", gb.n_train);
  c_gb->add_option("--n-test", gb.n_test);
  c_gb->add_option("--clique-size", gb.clique_size);
  c_gb->add_option("--feature-dim", gb.feature_dim);
  c_gb->add_option("--dummy-attach", gb.dummy_attach)->check(CLI::IsMember({"target", "clique"}));
  c_gb->add_option("--out-dir", gb.out_dir, "Output directory")->required();

  ReportOptions rp;
  auto* c_rp = app.add_subcommand("report", "Join the outputs in a directory by graph_id");
  c_rp->add_option("--dir", rp.dir, "Directory of curveprobe outputs")->required();
  c_rp->add_option("--out", rp.out, "Output file (default <dir>/report.json)");

  std::vector<std::string> expanded;
  try {
    expanded = expand_config(args, app);
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kValidation;
  }

  std::vector<const char*> argv;
  argv.reserve(expanded.size());
  for (const auto& a : expanded) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e, out, err);
    err << "error: " << e.what() << "\n\n";
    const CLI::App* active = &app;
    for (const CLI::App* s : app.get_subcommands()) active = s;
    err << active->help();
    return kUsage;
  }

  Context ctx;
  ctx.jobs = jobs;
  ctx.seed = seed;
  ctx.out = &out;
  ctx.manifest.command_line = join(args);
  ctx.manifest.tool_version = CURVEPROBE_VERSION;
  json snapshot = option_snapshot(app);
  for (const CLI::App* s : app.get_subcommands()) {
    snapshot["subcommand"] = s->get_name();
    snapshot[s->get_name()] = option_snapshot(*s);
  }
  ctx.manifest.config = std::move(snapshot);

  try {
    if (c_curv->parsed()) run_curvature(ctx, curv);
    else if (c_ma->parsed()) run_ma(ctx, ma);
    else if (c_en->parsed()) run_enrich(ctx, en);
    else if (c_co->parsed()) run_collapse(ctx, co);
    else if (c_sp->parsed()) run_spectral(ctx, sp);
    else if (c_pr->parsed()) run_prune(ctx, pr);
    else if (c_dl->parsed()) run_delta_loss(ctx, dl);
    else if (c_gb->parsed()) run_gen_barbell(ctx, gb);
    else if (c_rp->parsed()) run_report(ctx, rp);
  } catch (const CapabilityError& e) {
    err << "error: " << e.what() << "\n";
    return kCapability;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kValidation;
  }
  return kOk;
}

}  // namespace curveprobe::cli
