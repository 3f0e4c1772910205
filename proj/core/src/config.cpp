#include "graphbandit/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "graphbandit/errors.hpp"
#include "graphbandit/policy_strong.hpp"
#include "graphbandit/policy_weak.hpp"

namespace graphbandit {

namespace {

using nlohmann::json;

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw BadParameter(std::string("config parse error: ") + e.what());
  }
}

FeedbackGraph load_graph(const json& section) {
  if (!section.is_object()) throw BadParameter("graph section must be an object");
  if (section.contains("spec")) {
    return graph_catalog(section["spec"].get<std::string>());
  }
  if (section.contains("file")) {
    std::ifstream in(section["file"].get<std::string>());
    if (!in) {
      throw BadParameter("cannot open graph file: " +
                         section["file"].get<std::string>());
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    return FeedbackGraph::from_json_text(buffer.str());
  }
  if (section.contains("k") && section.contains("edges")) {
    return FeedbackGraph::from_json_text(section.dump());
  }
  throw BadParameter("graph section needs \"spec\", \"file\" or inline k/edges");
}

EnvironmentSpec load_environment(const json& section) {
  if (!section.is_object() || !section.contains("type")) {
    throw BadParameter("environment section needs a \"type\"");
  }
  const std::string type = section["type"].get<std::string>();
  auto load_stochastic = [](const json& s) {
    StochasticSpec spec;
    spec.means = s.at("means").get<std::vector<double>>();
    const std::string family = s.value("family", std::string("bernoulli"));
    if (family == "bernoulli") {
      spec.family = LossFamily::kBernoulli;
    } else if (family == "uniform") {
      spec.family = LossFamily::kUniformAroundMean;
    } else {
      throw BadParameter("unknown loss family \"" + family + "\"");
    }
    spec.uniform_halfwidth = s.value("halfwidth", 0.25);
    return spec;
  };
  if (type == "stochastic") return load_stochastic(section);
  if (type == "corrupted") {
    CorruptedSpec spec;
    if (!section.contains("base")) throw BadParameter("corrupted env needs \"base\"");
    spec.base = load_stochastic(section["base"]);
    spec.budget = section.value("budget", 0.0);
    const std::string strategy =
        section.value("strategy", std::string("flip_optimal_prefix"));
    if (strategy == "flip_optimal_prefix") {
      spec.strategy = CorruptionStrategy::kFlipOptimalPrefix;
    } else if (strategy == "periodic_swap") {
      spec.strategy = CorruptionStrategy::kPeriodicSwap;
    } else {
      throw BadParameter("unknown corruption strategy \"" + strategy + "\"");
    }
    spec.period = section.value("period", 10);
    return spec;
  }
  if (type == "adversarial") {
    AdversarialSpec spec;
    const std::string schedule =
        section.value("schedule", std::string("alternating_blocks"));
    if (schedule == "alternating_blocks") {
      spec.schedule = AlternatingBlocksSchedule{section.value("period", 100)};
    } else if (schedule == "linear_drift") {
      spec.schedule = LinearDriftSchedule{section.value("rate", 1e-4)};
    } else if (schedule == "scripted") {
      if (!section.contains("path")) throw BadParameter("scripted env needs \"path\"");
      spec.schedule = ScriptedSchedule{section["path"].get<std::string>()};
    } else {
      throw BadParameter("unknown adversarial schedule \"" + schedule + "\"");
    }
    return spec;
  }
  throw BadParameter("unknown environment type \"" + type + "\"");
}

bool is_auto(const json& v) { return v.is_string() && v.get<std::string>() == "auto"; }

double number_or(const json& section, const char* key, double fallback) {
  if (!section.contains(key) || is_auto(section[key])) return fallback;
  return section[key].get<double>();
}

struct PolicyResolution {
  PolicyConfig config;
  json echo;
};

PolicyResolution resolve_policy(const json& section, const FeedbackGraph& graph,
                                GraphAnalysis& analysis, std::int64_t horizon) {
  if (!section.is_object() || !section.contains("policy")) {
    throw BadParameter("policy section needs a \"policy\" name");
  }
  const std::string name = section["policy"].get<std::string>();
  const Observability obs = analysis.observability.tag;
  PolicyResolution out;
  out.echo["policy"] = name;

  const std::string alpha_source =
      section.value("alpha_source", std::string("greedy"));
  const double multiplier = section.value("theta_multiplier", 1.0);
  auto resolved_alpha = [&]() {
    if (section.contains("alpha") && !is_auto(section["alpha"])) {
      return section["alpha"].get<double>();
    }
    if (alpha_source == "exact") {
      if (analysis.alpha_exact) return static_cast<double>(*analysis.alpha_exact);
      throw BadParameter("exact alpha unavailable at this K; use greedy");
    }
    return static_cast<double>(analysis.alpha_lower);
  };

  if (name == "strong" || name == "exp3g") {
    if (obs != Observability::kStronglyObservable) {
      throw PolicyGraphMismatch("policy \"" + name +
                                "\" needs a strongly observable graph");
    }
    const double alpha = resolved_alpha();
    out.config.alpha = alpha;
    out.echo["alpha"] = alpha;
    out.echo["alpha_source"] = alpha_source;
    if (name == "strong") {
      out.config.kind = PolicyKind::kStrong;
      out.config.c1 = number_or(section, "c1",
                                multiplier * recommended_c1(alpha, graph.num_arms(), horizon));
      out.echo["c1"] = out.config.c1;
    } else {
      out.config.kind = PolicyKind::kExp3G;
    }
    return out;
  }

  if (name == "weak" || name == "weak_alt") {
    if (obs != Observability::kWeaklyObservable) {
      throw PolicyGraphMismatch("policy \"" + name +
                                "\" needs a weakly observable graph");
    }
    if (section.contains("dominating_set") &&
        !is_auto(section["dominating_set"])) {
      analysis.dominating_set = section["dominating_set"].get<std::vector<int>>();
      analysis.dominating_set_is_exact = false;
      std::tie(analysis.v1, analysis.v2) = partition_v1_v2(
          graph, analysis.dominating_set,
          analysis.rule == DominationRule::kNoSelfLoopTargets
              ? std::optional<DominationRule>(analysis.rule)
              : std::nullopt);
      analysis.delta_used = static_cast<int>(analysis.dominating_set.size());
      analysis.k_prime = static_cast<int>(analysis.v2.size());
    }
    const auto [auto_c1, auto_c2] = recommended_weak_params(
        std::max(1, analysis.delta_used), graph.num_arms(), horizon);
    out.config.kind = name == "weak" ? PolicyKind::kWeak : PolicyKind::kWeakAlt;
    out.config.c1 = number_or(section, "c1", multiplier * auto_c1);
    out.config.c2 = number_or(section, "c2", multiplier * auto_c2);
    out.echo["c1"] = out.config.c1;
    out.echo["c2"] = out.config.c2;
    out.echo["dominating_set"] = analysis.dominating_set;
    out.echo["domination_definition"] = to_string(analysis.rule);
    if (name == "weak_alt") {
      const double alpha2 = analysis.alpha2 ? static_cast<double>(*analysis.alpha2)
                                            : static_cast<double>(analysis.k_prime);
      out.config.c1_block2 = number_or(
          section, "c1_block2",
          multiplier * recommended_c1(std::max(1.0, alpha2), graph.num_arms(), horizon));
      out.echo["c1_block2"] = out.config.c1_block2;
      out.echo["alpha2"] = alpha2;
    }
    return out;
  }
  throw BadParameter("unknown policy \"" + name + "\"");
}

struct DocumentResolution {
  RunConfig config;
  std::vector<std::uint64_t> seeds;
  json echo;
  std::vector<std::string> warnings;
};

DocumentResolution resolve_document(const json& doc) {
  if (!doc.is_object()) throw BadParameter("config must be a JSON object");
  for (const char* key : {"graph", "policy", "environment", "run"}) {
    if (!doc.contains(key)) {
      throw BadParameter(std::string("config is missing section \"") + key + "\"");
    }
  }
  const json& run = doc["run"];
  const std::int64_t horizon = run.value("T", std::int64_t{0});
  if (horizon < 1) throw BadParameter("run.T must be a positive integer");

  FeedbackGraph graph = load_graph(doc["graph"]);

  GraphAnalysisOptions options;
  const std::string rule = doc["policy"].is_object()
                               ? doc["policy"].value("domination_definition",
                                                     std::string("no_self_loop"))
                               : std::string("no_self_loop");
  if (rule == "no_self_loop") {
    options.rule = DominationRule::kNoSelfLoopTargets;
  } else if (rule == "weakly_observable") {
    options.rule = DominationRule::kWeaklyObservableTargets;
  } else {
    throw BadParameter("unknown domination_definition \"" + rule + "\"");
  }
  if (classify_observability(graph).tag == Observability::kUnobservable) {
    throw PolicyGraphMismatch("graph is unobservable; no policy applies");
  }
  GraphAnalysis analysis = analyze_graph(graph, options);

  PolicyResolution policy = resolve_policy(doc["policy"], graph, analysis, horizon);

  EnvironmentSpec environment = load_environment(doc["environment"]);
  {  // validates arity and means against the graph
    Environment probe(environment, graph.num_arms(), 0);
  }

  DocumentResolution out{
      RunConfig{std::move(graph), std::move(analysis), policy.config,
                std::move(environment), horizon},
      {},
      {},
      {}};

  const std::string trace = run.value("trace", std::string("summary"));
  if (trace == "none") {
    out.config.trace_level = TraceLevel::kNone;
  } else if (trace == "summary") {
    out.config.trace_level = TraceLevel::kSummary;
  } else if (trace == "full") {
    out.config.trace_level = TraceLevel::kFull;
  } else {
    throw BadParameter("unknown trace level \"" + trace + "\"");
  }
  out.config.check_invariants = run.value("check_invariants", false);
  out.config.config_id = run.value("id", std::string("run"));
  out.config.group_id = out.config.config_id;

  if (run.contains("seeds")) {
    const json& seeds = run["seeds"];
    if (seeds.is_array()) {
      for (const auto& s : seeds) out.seeds.push_back(s.get<std::uint64_t>());
    } else if (seeds.is_object()) {
      const std::uint64_t count = seeds.value("count", 1);
      const std::uint64_t base = seeds.value("base", 1);
      for (std::uint64_t s = 0; s < count; ++s) out.seeds.push_back(base + s);
    } else {
      out.seeds.push_back(seeds.get<std::uint64_t>());
    }
  } else {
    out.seeds.push_back(1);
  }
  if (out.seeds.empty()) throw BadParameter("run.seeds resolved to nothing");

  const double k3 = std::pow(static_cast<double>(out.config.graph.num_arms()), 3.0);
  if (static_cast<double>(horizon) < k3) {
    out.warnings.push_back("run.T below K^3; minimax characterization assumes T >= K^3");
  }

  out.echo["policy"] = policy.echo;
  out.echo["observability"] = to_string(out.config.analysis.observability.tag);
  out.echo["alpha_lower"] = out.config.analysis.alpha_lower;
  out.echo["alpha_upper"] = out.config.analysis.alpha_upper;
  if (out.config.analysis.alpha_exact) {
    out.echo["alpha_exact"] = *out.config.analysis.alpha_exact;
  }
  out.echo["delta_used"] = out.config.analysis.delta_used;
  out.echo["k_prime"] = out.config.analysis.k_prime;
  out.echo["T"] = horizon;
  out.echo["trace"] = trace;
  out.echo["warnings"] = out.warnings;
  return out;
}

std::string dotted_to_pointer(const std::string& dotted) {
  std::string pointer;
  std::stringstream ss(dotted);
  std::string part;
  while (std::getline(ss, part, '.')) pointer += "/" + part;
  return pointer;
}

json parse_override_value(const std::string& text) {
  const json parsed = json::parse(text, nullptr, false);
  if (!parsed.is_discarded()) return parsed;
  return json(text);  // fall back to a plain string
}

}  // namespace

ConfigResolution resolve_config_text(const std::string& json_text) {
  DocumentResolution doc = resolve_document(parse_json(json_text));
  ConfigResolution out{std::move(doc.config), std::move(doc.seeds),
                       doc.echo.dump(2), std::move(doc.warnings)};
  return out;
}

SweepPlan resolve_sweep_text(const std::string& json_text) {
  json doc = parse_json(json_text);
  SweepPlan plan;
  json sweep = doc.contains("sweep") ? doc["sweep"] : json::object();
  doc.erase("sweep");
  if (!sweep.is_object()) throw BadParameter("sweep section must be an object");

  std::vector<std::string> keys;
  for (auto it = sweep.begin(); it != sweep.end(); ++it) {
    if (!it.value().is_array() || it.value().empty()) {
      throw BadParameter("sweep values must be nonempty arrays");
    }
    keys.push_back(it.key());
  }

  std::vector<json> combos{json::object()};
  for (const auto& key : keys) {
    std::vector<json> next;
    for (const auto& combo : combos) {
      for (const auto& value : sweep[key]) {
        json extended = combo;
        extended[key] = value;
        next.push_back(std::move(extended));
      }
    }
    combos = std::move(next);
  }

  json echo = json::array();
  for (std::size_t i = 0; i < combos.size(); ++i) {
    json cell_doc = doc;
    std::string id = "c" + std::to_string(i);
    std::string group;
    for (const auto& key : keys) {
      const json& value = combos[i][key];
      cell_doc[json::json_pointer(dotted_to_pointer(key))] = value;
      const std::string assignment = key + "=" + value.dump();
      id += "," + assignment;
      if (key != "run.T" && key != "T") {
        group += group.empty() ? assignment : "," + assignment;
      }
    }
    DocumentResolution resolved = resolve_document(cell_doc);
    resolved.config.config_id = id;
    resolved.config.group_id = group.empty() ? "base" : group;
    if (plan.cells.empty()) {
      plan.seeds = resolved.seeds;
      plan.warnings = resolved.warnings;
    }
    json cell_echo;
    cell_echo["id"] = id;
    cell_echo["group"] = resolved.config.group_id;
    cell_echo["resolved"] = resolved.echo;
    echo.push_back(std::move(cell_echo));
    plan.cells.push_back(std::move(resolved.config));
  }
  plan.echo_json = echo.dump(2);
  return plan;
}

std::string apply_overrides(
    const std::string& json_text,
    const std::vector<std::pair<std::string, std::string>>& overrides) {
  json doc = parse_json(json_text);
  for (const auto& [path, value] : overrides) {
    try {
      doc[json::json_pointer(dotted_to_pointer(path))] = parse_override_value(value);
    } catch (const json::exception& e) {
      throw BadParameter("cannot apply override \"" + path + "\": " + e.what());
    }
  }
  return doc.dump();
}

}  // namespace graphbandit
