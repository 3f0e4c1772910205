#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "graphbandit/harness.hpp"

namespace graphbandit {

// A resolved single-cell configuration: every "auto" replaced by a concrete
// value, with the resolution echoed so runs are self-describing.
struct ConfigResolution {
  RunConfig config;
  std::vector<std::uint64_t> seeds;
  std::string echo_json;  // resolved parameters, JSON object
  std::vector<std::string> warnings;
};

// A sweep plan: the cross product of the "sweep" section's value lists
// applied to the base document.
struct SweepPlan {
  std::vector<RunConfig> cells;
  std::vector<std::uint64_t> seeds;
  std::string echo_json;
  std::vector<std::string> warnings;
};

// Parses and resolves a config document:
// {
//   "graph":       {"spec": "bandit:5"} | {"k": ..., "edges": [[i,j],...]} |
//                  {"file": "graph.json"},
//   "policy":      {"policy": "strong"|"weak"|"weak_alt"|"exp3g", ...},
//   "environment": {"type": "stochastic"|"corrupted"|"adversarial", ...},
//   "run":         {"T": ..., "seeds": [...] | {"count": n, "base": b},
//                   "trace": "none"|"summary"|"full", ...}
// }
// Throws BadParameter on malformed input and PolicyGraphMismatch (or the
// specific observability error) on an incompatible policy/graph pair.
ConfigResolution resolve_config_text(const std::string& json_text);

// Same, honoring an optional top-level "sweep" object whose keys are dotted
// config paths and whose values are arrays to cross. Cells crossing "run.T"
// share a group id so scaling fits span the T axis.
SweepPlan resolve_sweep_text(const std::string& json_text);

// Applies --set style overrides (dotted path = JSON scalar) to a document.
std::string apply_overrides(
    const std::string& json_text,
    const std::vector<std::pair<std::string, std::string>>& overrides);

}  // namespace graphbandit
