// Command-line front end: graph inspection, single runs, sweeps, config
// validation and CSV/plot export.
//
// Exit codes: 0 ok, 2 parse/config error, 3 policy/graph compatibility,
// 4 runtime failure.

#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "graphbandit/config.hpp"
#include "graphbandit/errors.hpp"
#include "graphbandit/graph.hpp"
#include "graphbandit/harness.hpp"
#include "graphbandit/runio.hpp"

namespace gb = graphbandit;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitParse = 2;
constexpr int kExitCompatibility = 3;
constexpr int kExitRuntime = 4;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw gb::BadParameter("cannot open file: " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

struct CommonArgs {
  std::string config_path;
  std::vector<std::string> sets;
  std::string out_dir = "out";
  std::string trace_override;
  std::int64_t seed_override = -1;
  int jobs = 1;
};

std::string load_config_with_overrides(const CommonArgs& args) {
  std::string text = read_file(args.config_path);
  std::vector<std::pair<std::string, std::string>> overrides;
  for (const auto& set : args.sets) {
    const auto eq = set.find('=');
    if (eq == std::string::npos) {
      throw gb::BadParameter("--set expects path=value, got \"" + set + "\"");
    }
    overrides.emplace_back(set.substr(0, eq), set.substr(eq + 1));
  }
  if (!args.trace_override.empty()) {
    overrides.emplace_back("run.trace", "\"" + args.trace_override + "\"");
  }
  if (args.seed_override >= 0) {
    overrides.emplace_back("run.seeds", "[" + std::to_string(args.seed_override) + "]");
  }
  return gb::apply_overrides(text, overrides);
}

int classify_exception() {
  try {
    throw;
  } catch (const gb::PolicyGraphMismatch&) {
    return kExitCompatibility;
  } catch (const gb::NotStronglyObservable&) {
    return kExitCompatibility;
  } catch (const gb::NotWeaklyObservable&) {
    return kExitCompatibility;
  } catch (const gb::EmptyV2&) {
    return kExitCompatibility;
  } catch (const gb::BadParameter&) {
    return kExitParse;
  } catch (...) {
    return kExitRuntime;
  }
}

nlohmann::json graph_report(const gb::FeedbackGraph& graph) {
  nlohmann::json report;
  report["k"] = graph.num_arms();
  const auto observability = gb::classify_observability(graph);
  report["observability"] = gb::to_string(observability.tag);

  if (graph.num_arms() <= 20) {
    report["alpha_exact"] = *gb::independence_number_exact(graph).exact;
  } else {
    const auto bounds = gb::independence_number_greedy(graph);
    report["alpha_lower"] = bounds.lower;
    report["alpha_upper"] = bounds.upper;
  }

  const bool small = graph.num_arms() <= 16;
  for (const gb::DominationRule rule :
       {gb::DominationRule::kNoSelfLoopTargets,
        gb::DominationRule::kWeaklyObservableTargets}) {
    nlohmann::json entry;
    entry["targets"] = gb::domination_targets(graph, rule);
    try {
      entry["greedy"] = gb::weakly_dominating_set_greedy(graph, rule);
      if (small) {
        const auto exact = gb::weakly_dominating_set_exact(graph, rule);
        entry["exact"] = exact;
        entry["delta"] = exact.size();
      }
    } catch (const gb::UncoverableTarget& e) {
      entry["uncoverable"] = e.what();
    }
    report["domination"][gb::to_string(rule)] = entry;
  }

  if (observability.tag != gb::Observability::kUnobservable) {
    const gb::GraphAnalysis analysis = gb::analyze_graph(graph);
    report["dominating_set"] = analysis.dominating_set;
    report["v1"] = analysis.v1;
    report["v2"] = analysis.v2;
    report["k_prime"] = analysis.k_prime;
    if (analysis.alpha2) report["alpha2"] = *analysis.alpha2;
  }
  return report;
}

int cmd_graph_info(const std::string& spec, bool infer_policy) {
  gb::FeedbackGraph graph = [&]() {
    if (std::filesystem::exists(spec)) {
      return gb::FeedbackGraph::from_json_text(read_file(spec));
    }
    return gb::graph_catalog(spec);
  }();
  nlohmann::json report = graph_report(graph);
  if (infer_policy) {
    const auto tag = gb::classify_observability(graph).tag;
    if (tag == gb::Observability::kUnobservable) {
      std::cerr << "graph is unobservable; no sublinear-regret policy applies\n";
      return kExitCompatibility;
    }
    report["recommended_policy"] =
        tag == gb::Observability::kStronglyObservable ? "strong" : "weak";
  }
  std::cout << report.dump(2) << "\n";
  return kExitOk;
}

int cmd_validate(const CommonArgs& args) {
  const std::string text = load_config_with_overrides(args);
  const gb::ConfigResolution resolution = gb::resolve_config_text(text);
  for (const auto& warning : resolution.warnings) {
    std::cerr << "warning: " << warning << "\n";
  }
  std::cout << resolution.echo_json << "\n";
  return kExitOk;
}

int cmd_run(const CommonArgs& args) {
  const std::string text = load_config_with_overrides(args);
  gb::ConfigResolution resolution = gb::resolve_config_text(text);
  for (const auto& warning : resolution.warnings) {
    std::cerr << "warning: " << warning << "\n";
  }

  gb::SweepResult result =
      gb::sweep({resolution.config}, resolution.seeds, args.jobs);
  for (const auto& row : result.rows) {
    if (row.failed) throw gb::Error("episode failed: " + row.error);
  }

  namespace fs = std::filesystem;
  const fs::path out(args.out_dir);
  gb::atomic_write_file((out / "results.csv").string(),
                        gb::results_csv(result.rows));
  gb::atomic_write_file(
      (out / "summary.json").string(),
      gb::summary_json(result, resolution.echo_json, resolution.warnings));
  if (resolution.config.trace_level != gb::TraceLevel::kNone) {
    for (const auto seed : resolution.seeds) {
      const gb::Trace trace = gb::run_episode(resolution.config, seed);
      gb::atomic_write_file(
          (out / ("trace_seed" + std::to_string(seed) + ".csv")).string(),
          gb::trace_csv(trace));
    }
  }
  std::cout << "final_regret_mean=" << gb::format_double(result.cells[0].mean_regret)
            << " stderr=" << gb::format_double(result.cells[0].stderr_regret)
            << " seeds=" << result.cells[0].seeds << "\n";
  return kExitOk;
}

int cmd_sweep(const CommonArgs& args) {
  const std::string text = load_config_with_overrides(args);
  gb::SweepPlan plan = gb::resolve_sweep_text(text);
  for (const auto& warning : plan.warnings) {
    std::cerr << "warning: " << warning << "\n";
  }
  const gb::SweepResult result = gb::sweep(plan.cells, plan.seeds, args.jobs);

  namespace fs = std::filesystem;
  const fs::path out(args.out_dir);
  gb::atomic_write_file((out / "results.csv").string(),
                        gb::results_csv(result.rows));
  gb::atomic_write_file((out / "summary.json").string(),
                        gb::summary_json(result, plan.echo_json, plan.warnings));

  std::cout << "config_id,T,seeds,mean_regret,stderr_regret\n";
  for (const auto& cell : result.cells) {
    std::cout << cell.config_id << ',' << cell.horizon << ',' << cell.seeds
              << ',' << gb::format_double(cell.mean_regret) << ','
              << gb::format_double(cell.stderr_regret) << "\n";
  }
  for (const auto& fit : result.fits) {
    std::cout << "# group " << fit.group_id
              << " loglog_slope=" << gb::format_double(fit.loglog_slope) << "\n";
  }
  return kExitOk;
}

int cmd_export(const std::string& results_path, const std::string& format,
               const std::string& out_dir) {
  const std::string csv = read_file(results_path);
  std::stringstream ss(csv);
  std::string header;
  if (!std::getline(ss, header)) throw gb::BadParameter("results CSV is empty");
  for (const char* column : {"config_id", "T", "final_regret", "status"}) {
    if (header.find(column) == std::string::npos) {
      throw gb::BadParameter(std::string("results CSV lacks column ") + column);
    }
  }
  std::string row;
  if (!std::getline(ss, row) || row.empty()) {
    throw gb::BadParameter("results CSV has no data rows");
  }

  namespace fs = std::filesystem;
  const fs::path out(out_dir);
  if (format == "csv") {
    gb::atomic_write_file((out / "export.csv").string(), csv);
    std::cout << (out / "export.csv").string() << "\n";
  } else if (format == "plot-script") {
    gb::atomic_write_file((out / "plot_regret.py").string(),
                          gb::plot_script_text(results_path));
    std::cout << (out / "plot_regret.py").string() << "\n";
  } else {
    throw gb::BadParameter("export format must be csv or plot-script");
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Online learning with directed feedback graphs"};
  app.require_subcommand(1);

  std::string graph_spec;
  bool infer_policy = false;
  auto* info = app.add_subcommand("graph-info",
                                  "Classify a graph and report alpha/delta/D/V1/V2");
  info->add_option("spec", graph_spec,
                   "Catalog spec (e.g. revealing_action:5) or JSON file")
      ->required();
  info->add_flag("--infer-policy", infer_policy,
                 "Also recommend a policy; fails on unobservable graphs");

  CommonArgs run_args, sweep_args, validate_args;
  auto add_common = [](CLI::App* cmd, CommonArgs& args, bool with_seed) {
    cmd->add_option("--config", args.config_path, "Config JSON path")->required();
    cmd->add_option("--set", args.sets, "Override config values (path=value)");
    cmd->add_option("--out", args.out_dir, "Output directory");
    cmd->add_option("--jobs", args.jobs, "Parallel episodes");
    cmd->add_option("--trace", args.trace_override,
                    "Trace detail: none|summary|full");
    if (with_seed) {
      cmd->add_option("--seed", args.seed_override, "Run a single seed");
    }
  };
  auto* run = app.add_subcommand("run", "Run one configuration");
  add_common(run, run_args, true);
  auto* sweep_cmd = app.add_subcommand("sweep", "Run a sweep cross product");
  add_common(sweep_cmd, sweep_args, false);
  auto* validate = app.add_subcommand("validate",
                                      "Resolve a config and echo parameters");
  add_common(validate, validate_args, true);

  std::string results_path, export_format = "plot-script", export_out = "out";
  auto* export_cmd = app.add_subcommand("export", "Export results artifacts");
  export_cmd->add_option("results", results_path, "results.csv path")->required();
  export_cmd->add_option("--format", export_format, "csv | plot-script");
  export_cmd->add_option("--out", export_out, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitParse;
  }

  try {
    if (info->parsed()) return cmd_graph_info(graph_spec, infer_policy);
    if (run->parsed()) return cmd_run(run_args);
    if (sweep_cmd->parsed()) return cmd_sweep(sweep_args);
    if (validate->parsed()) return cmd_validate(validate_args);
    if (export_cmd->parsed()) {
      return cmd_export(results_path, export_format, export_out);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return classify_exception();
  }
  return kExitParse;
}
