#include "graphbandit/graph.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <sstream>

#include <nlohmann/json.hpp>

#include "graphbandit/errors.hpp"
#include "graphbandit/numeric.hpp"

namespace graphbandit {

namespace {

void require(bool cond, const std::string& msg) {
  if (!cond) throw BadParameter(msg);
}

}  // namespace

FeedbackGraph::FeedbackGraph(int num_arms,
                             const std::vector<std::pair<int, int>>& edges)
    : k_(num_arms) {
  require(k_ >= 2, "feedback graph needs at least 2 arms");
  in_.assign(k_, {});
  out_.assign(k_, {});
  adj_.assign(static_cast<std::size_t>(k_) * k_, 0);
  for (const auto& [from, to] : edges) {
    require(from >= 1 && from <= k_ && to >= 1 && to <= k_,
            "edge endpoint out of range");
    char& cell = adj_[static_cast<std::size_t>(from - 1) * k_ + (to - 1)];
    if (cell) continue;  // duplicate edges are tolerated
    cell = 1;
    out_[from - 1].push_back(to);
    in_[to - 1].push_back(from);
  }
  for (auto& v : in_) std::sort(v.begin(), v.end());
  for (auto& v : out_) std::sort(v.begin(), v.end());
}

bool FeedbackGraph::has_edge(int from, int to) const {
  require(from >= 1 && from <= k_ && to >= 1 && to <= k_,
          "vertex out of range");
  return adj_[static_cast<std::size_t>(from - 1) * k_ + (to - 1)] != 0;
}

const std::vector<int>& FeedbackGraph::in_neighbors(int v) const {
  require(v >= 1 && v <= k_, "vertex out of range");
  return in_[v - 1];
}

const std::vector<int>& FeedbackGraph::out_neighbors(int v) const {
  require(v >= 1 && v <= k_, "vertex out of range");
  return out_[v - 1];
}

std::vector<std::pair<int, int>> FeedbackGraph::edges() const {
  std::vector<std::pair<int, int>> out;
  for (int i = 1; i <= k_; ++i) {
    for (int j : out_neighbors(i)) out.emplace_back(i, j);
  }
  return out;
}

FeedbackGraph FeedbackGraph::from_json_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw BadParameter(std::string("graph JSON parse error: ") + e.what());
  }
  if (!j.is_object() || !j.contains("k") || !j.contains("edges")) {
    throw BadParameter("graph JSON must be an object with \"k\" and \"edges\"");
  }
  std::vector<std::pair<int, int>> edges;
  for (const auto& e : j["edges"]) {
    if (!e.is_array() || e.size() != 2) {
      throw BadParameter("graph JSON edge must be a pair [i, j]");
    }
    edges.emplace_back(e[0].get<int>(), e[1].get<int>());
  }
  return FeedbackGraph(j["k"].get<int>(), edges);
}

std::string FeedbackGraph::to_json_text() const {
  nlohmann::json j;
  j["k"] = k_;
  auto arr = nlohmann::json::array();
  for (const auto& [i, e] : edges()) arr.push_back({i, e});
  j["edges"] = arr;
  return j.dump();
}

FeedbackGraph FeedbackGraph::induced_subgraph(
    const std::vector<int>& vertices) const {
  require(vertices.size() >= 2, "induced subgraph needs at least 2 vertices");
  std::vector<int> index(k_ + 1, 0);
  for (std::size_t m = 0; m < vertices.size(); ++m) {
    int v = vertices[m];
    require(v >= 1 && v <= k_, "vertex out of range");
    require(index[v] == 0, "duplicate vertex in induced subgraph");
    index[v] = static_cast<int>(m) + 1;
  }
  std::vector<std::pair<int, int>> edges;
  for (int v : vertices) {
    for (int w : out_neighbors(v)) {
      if (index[w] != 0) edges.emplace_back(index[v], index[w]);
    }
  }
  return FeedbackGraph(static_cast<int>(vertices.size()), edges);
}

std::string to_string(Observability obs) {
  switch (obs) {
    case Observability::kStronglyObservable: return "strongly_observable";
    case Observability::kWeaklyObservable: return "weakly_observable";
    case Observability::kUnobservable: return "unobservable";
  }
  return "unknown";
}

std::string to_string(DominationRule rule) {
  return rule == DominationRule::kNoSelfLoopTargets ? "no_self_loop"
                                                    : "weakly_observable";
}

std::vector<int> ObservabilityReport::weakly_observable_vertices() const {
  std::vector<int> w;
  for (std::size_t i = 0; i < vertex.size(); ++i) {
    if (vertex[i].weakly_observable) w.push_back(static_cast<int>(i) + 1);
  }
  return w;
}

ObservabilityReport classify_observability(const FeedbackGraph& g) {
  const int k = g.num_arms();
  ObservabilityReport report;
  report.vertex.resize(k);
  bool any_unobserved = false;
  bool all_strong = true;
  for (int v = 1; v <= k; ++v) {
    VertexObservability& f = report.vertex[v - 1];
    const auto& in = g.in_neighbors(v);
    f.has_self_loop = g.has_self_loop(v);
    // V \ {v} subset of N_in(v): in-degree ignoring the self-loop is K-1.
    int others = static_cast<int>(in.size()) - (f.has_self_loop ? 1 : 0);
    f.observed_by_all_others = (others == k - 1);
    f.unobserved = in.empty();
    f.weakly_observable =
        !f.unobserved && !f.has_self_loop && !f.observed_by_all_others;
    if (f.unobserved) any_unobserved = true;
    if (!f.has_self_loop && !f.observed_by_all_others) all_strong = false;
  }
  if (any_unobserved) {
    report.tag = Observability::kUnobservable;
  } else if (all_strong) {
    report.tag = Observability::kStronglyObservable;
  } else {
    report.tag = Observability::kWeaklyObservable;
  }
  return report;
}

std::vector<int> domination_targets(const FeedbackGraph& g,
                                    DominationRule rule) {
  std::vector<int> targets;
  if (rule == DominationRule::kNoSelfLoopTargets) {
    for (int v = 1; v <= g.num_arms(); ++v) {
      if (!g.has_self_loop(v)) targets.push_back(v);
    }
  } else {
    targets = classify_observability(g).weakly_observable_vertices();
  }
  return targets;
}

namespace {

using Mask = std::uint64_t;

void check_targets_coverable(const FeedbackGraph& g,
                             const std::vector<int>& targets) {
  for (int t : targets) {
    if (g.in_neighbors(t).empty()) {
      throw UncoverableTarget("target vertex " + std::to_string(t) +
                              " has an empty in-neighborhood");
    }
  }
}

// Bitmask of targets covered by N_out(v), targets indexed by position.
std::vector<Mask> cover_masks(const FeedbackGraph& g,
                              const std::vector<int>& targets) {
  std::vector<int> target_pos(g.num_arms() + 1, -1);
  for (std::size_t p = 0; p < targets.size(); ++p) target_pos[targets[p]] = static_cast<int>(p);
  std::vector<Mask> masks(g.num_arms() + 1, 0);
  for (int v = 1; v <= g.num_arms(); ++v) {
    Mask m = 0;
    for (int w : g.out_neighbors(v)) {
      if (target_pos[w] >= 0) m |= Mask{1} << target_pos[w];
    }
    masks[v] = m;
  }
  return masks;
}

}  // namespace

std::vector<int> weakly_dominating_set_greedy(const FeedbackGraph& g,
                                              DominationRule rule) {
  const auto targets = domination_targets(g, rule);
  if (targets.empty()) return {};
  check_targets_coverable(g, targets);
  const auto masks = cover_masks(g, targets);
  const Mask all = targets.size() == 64 ? ~Mask{0}
                                        : (Mask{1} << targets.size()) - 1;
  Mask covered = 0;
  std::vector<int> d;
  while (covered != all) {
    int best = -1;
    int best_gain = 0;
    for (int v = 1; v <= g.num_arms(); ++v) {
      int gain = std::popcount(masks[v] & ~covered);
      if (gain > best_gain) {  // ties keep the lowest index
        best_gain = gain;
        best = v;
      }
    }
    if (best < 0) {
      throw UncoverableTarget("greedy cover stalled with uncovered targets");
    }
    d.push_back(best);
    covered |= masks[best];
  }
  std::sort(d.begin(), d.end());
  return d;
}

std::vector<int> weakly_dominating_set_exact(const FeedbackGraph& g,
                                             DominationRule rule, int max_k) {
  const int k = g.num_arms();
  if (k > max_k) {
    throw TooLarge("exact dominating set capped at K <= " +
                   std::to_string(max_k));
  }
  const auto targets = domination_targets(g, rule);
  if (targets.empty()) return {};
  check_targets_coverable(g, targets);
  const auto masks = cover_masks(g, targets);
  const Mask all = targets.size() == 64 ? ~Mask{0}
                                        : (Mask{1} << targets.size()) - 1;

  // Increasing size, and within a size lexicographic order over vertex
  // indices, so the first cover found is the lexicographically smallest
  // minimum.
  std::vector<int> chosen;
  std::vector<int> result;
  auto search = [&](auto&& self, int next, int remaining, Mask covered) -> bool {
    if (covered == all) {
      result = chosen;
      return true;
    }
    if (remaining == 0) return false;
    // Not enough vertices left to fill the subset.
    for (int v = next; v + remaining <= k + 1; ++v) {
      chosen.push_back(v);
      if (self(self, v + 1, remaining - 1, covered | masks[v])) return true;
      chosen.pop_back();
    }
    return false;
  };
  for (int size = 1; size <= k; ++size) {
    chosen.clear();
    if (search(search, 1, size, 0)) return result;
  }
  throw UncoverableTarget("no subset covers the target set");
}

namespace {

// Undirected conflict adjacency for independence computations: distinct
// vertices u, v conflict iff (u,v) or (v,u) is an edge. Self-loops ignored.
std::vector<Mask> conflict_masks(const FeedbackGraph& g) {
  const int k = g.num_arms();
  std::vector<Mask> conf(k, 0);
  for (int u = 1; u <= k; ++u) {
    for (int v = 1; v <= k; ++v) {
      if (u == v) continue;
      if (g.has_edge(u, v) || g.has_edge(v, u)) {
        conf[u - 1] |= Mask{1} << (v - 1);
      }
    }
  }
  return conf;
}

int max_independent_branch_bound(const std::vector<Mask>& conf, int k) {
  int best = 0;
  // candidates = vertices still allowed; picks in increasing index order.
  auto rec = [&](auto&& self, Mask candidates, int size) -> void {
    if (size + std::popcount(candidates) <= best) return;  // prune
    if (candidates == 0) {
      best = std::max(best, size);
      return;
    }
    const int v = std::countr_zero(candidates);
    // Branch 1: take v, drop its conflicts.
    self(self, candidates & ~(Mask{1} << v) & ~conf[v], size + 1);
    // Branch 2: skip v.
    self(self, candidates & ~(Mask{1} << v), size);
  };
  const Mask all = k == 64 ? ~Mask{0} : (Mask{1} << k) - 1;
  rec(rec, all, 0);
  return best;
}

}  // namespace

IndependenceBounds independence_number_exact(const FeedbackGraph& g,
                                             int max_k) {
  if (g.num_arms() > max_k) {
    throw TooLarge("exact independence number capped at K <= " +
                   std::to_string(max_k));
  }
  const int alpha =
      max_independent_branch_bound(conflict_masks(g), g.num_arms());
  IndependenceBounds b;
  b.lower = alpha;
  b.upper = alpha;
  b.exact = alpha;
  return b;
}

IndependenceBounds independence_number_greedy(const FeedbackGraph& g) {
  const int k = g.num_arms();
  auto conf = conflict_masks(g);
  Mask alive = k == 64 ? ~Mask{0} : (Mask{1} << k) - 1;
  int size = 0;
  while (alive != 0) {
    // Minimum residual degree, ties by lowest index.
    int best = -1;
    int best_deg = k + 1;
    for (int v = 0; v < k; ++v) {
      if (!(alive & (Mask{1} << v))) continue;
      int deg = std::popcount(conf[v] & alive);
      if (deg < best_deg) {
        best_deg = deg;
        best = v;
      }
    }
    ++size;
    alive &= ~(Mask{1} << best);
    alive &= ~conf[best];
  }
  IndependenceBounds b;
  b.lower = size;
  b.upper = k;
  return b;
}

std::pair<std::vector<int>, std::vector<int>> partition_v1_v2(
    const FeedbackGraph& g, const std::vector<int>& d,
    std::optional<DominationRule> check_rule) {
  std::vector<char> in_v1(g.num_arms() + 1, 0);
  for (int v : d) {
    if (v < 1 || v > g.num_arms()) throw BadParameter("D vertex out of range");
    for (int w : g.out_neighbors(v)) in_v1[w] = 1;
  }
  std::vector<int> v1, v2;
  for (int v = 1; v <= g.num_arms(); ++v) {
    (in_v1[v] ? v1 : v2).push_back(v);
  }
  if (check_rule == DominationRule::kNoSelfLoopTargets) {
    for (int v : v2) {
      if (!g.has_self_loop(v)) {
        throw InvalidDominatingSet(
            "vertex " + std::to_string(v) +
            " in V2 lacks a self-loop under the no-self-loop target rule");
      }
    }
  }
  return {std::move(v1), std::move(v2)};
}

GraphAnalysis analyze_graph(const FeedbackGraph& g,
                            const GraphAnalysisOptions& options) {
  GraphAnalysis a;
  a.observability = classify_observability(g);
  a.rule = options.rule;
  if (g.num_arms() <= options.exact_delta_cap) {
    a.dominating_set = weakly_dominating_set_exact(g, options.rule,
                                                   options.exact_delta_cap);
    a.dominating_set_is_exact = true;
  } else {
    a.dominating_set = weakly_dominating_set_greedy(g, options.rule);
  }
  a.delta_used = static_cast<int>(a.dominating_set.size());
  std::tie(a.v1, a.v2) = partition_v1_v2(
      g, a.dominating_set,
      options.rule == DominationRule::kNoSelfLoopTargets
          ? std::optional<DominationRule>(options.rule)
          : std::nullopt);
  a.k_prime = static_cast<int>(a.v2.size());
  if (g.num_arms() <= options.exact_alpha_cap) {
    const auto bounds = independence_number_exact(g, options.exact_alpha_cap);
    a.alpha_lower = bounds.lower;
    a.alpha_upper = bounds.upper;
    a.alpha_exact = bounds.exact;
  } else {
    const auto bounds = independence_number_greedy(g);
    a.alpha_lower = bounds.lower;
    a.alpha_upper = bounds.upper;
  }
  if (a.observability.tag == Observability::kWeaklyObservable &&
      a.v2.size() >= 2 &&
      static_cast<int>(a.v2.size()) <= options.exact_alpha_cap) {
    a.alpha2 = independence_number_exact(g.induced_subgraph(a.v2),
                                         options.exact_alpha_cap)
                   .exact;
  } else if (a.observability.tag == Observability::kWeaklyObservable &&
             a.v2.size() == 1) {
    a.alpha2 = 1;
  }
  return a;
}

FeedbackGraph make_bandit(int k) {
  std::vector<std::pair<int, int>> e;
  for (int i = 1; i <= k; ++i) e.emplace_back(i, i);
  return FeedbackGraph(k, e);
}

FeedbackGraph make_full_feedback(int k) {
  std::vector<std::pair<int, int>> e;
  for (int i = 1; i <= k; ++i) {
    for (int j = 1; j <= k; ++j) e.emplace_back(i, j);
  }
  return FeedbackGraph(k, e);
}

FeedbackGraph make_loopless_clique(int k) {
  std::vector<std::pair<int, int>> e;
  for (int i = 1; i <= k; ++i) {
    for (int j = 1; j <= k; ++j) {
      if (i != j) e.emplace_back(i, j);
    }
  }
  return FeedbackGraph(k, e);
}

FeedbackGraph make_revealing_action(int k) {
  // Arm 1 reveals every loss including its own; the other arms reveal
  // nothing. Weakly observable for K >= 3 with D = {1}.
  std::vector<std::pair<int, int>> e;
  for (int j = 1; j <= k; ++j) e.emplace_back(1, j);
  return FeedbackGraph(k, e);
}

FeedbackGraph make_total_order(int k) {
  std::vector<std::pair<int, int>> e;
  for (int i = 1; i <= k; ++i) {
    for (int j = 1; j <= i; ++j) e.emplace_back(i, j);
  }
  return FeedbackGraph(k, e);
}

FeedbackGraph make_random(int k, double p, std::uint64_t seed) {
  if (!(p >= 0.0 && p <= 1.0)) throw BadParameter("edge probability not in [0,1]");
  std::vector<std::pair<int, int>> e;
  for (int i = 1; i <= k; ++i) {
    for (int j = 1; j <= k; ++j) {
      if (i == j) {
        e.emplace_back(i, j);  // self-loops always included
      } else if (counter_uniform(seed, 17, i, j) < p) {
        e.emplace_back(i, j);
      }
    }
  }
  return FeedbackGraph(k, e);
}

FeedbackGraph graph_catalog(const std::string& spec) {
  std::vector<std::string> parts;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(item);
  if (parts.empty()) throw BadParameter("empty graph spec");

  auto parse_int = [&](const std::string& s) {
    int value = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
      throw BadParameter("bad integer in graph spec: \"" + s + "\"");
    }
    return value;
  };
  auto parse_double = [&](const std::string& s) {
    try {
      std::size_t pos = 0;
      double value = std::stod(s, &pos);
      if (pos != s.size()) throw std::invalid_argument(s);
      return value;
    } catch (const std::exception&) {
      throw BadParameter("bad real in graph spec: \"" + s + "\"");
    }
  };

  const std::string& name = parts[0];
  if (name == "random") {
    if (parts.size() != 4) throw BadParameter("random spec is random:K:p:seed");
    return make_random(parse_int(parts[1]), parse_double(parts[2]),
                       static_cast<std::uint64_t>(parse_int(parts[3])));
  }
  if (parts.size() != 2) {
    throw BadParameter("graph spec \"" + spec + "\" is not name:K");
  }
  const int k = parse_int(parts[1]);
  if (name == "bandit") return make_bandit(k);
  if (name == "full_feedback") return make_full_feedback(k);
  if (name == "loopless_clique") return make_loopless_clique(k);
  if (name == "revealing_action") return make_revealing_action(k);
  if (name == "total_order") return make_total_order(k);
  throw BadParameter("unknown graph family \"" + name + "\"");
}

}  // namespace graphbandit
