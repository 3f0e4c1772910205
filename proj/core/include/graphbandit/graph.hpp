#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace graphbandit {

// Directed feedback graph over arms 1..K. Edge (i, j) means that playing
// arm i reveals the loss of arm j. Vertices are 1-indexed at every public
// surface; internal storage is 0-indexed.
class FeedbackGraph {
 public:
  FeedbackGraph(int num_arms, const std::vector<std::pair<int, int>>& edges);

  int num_arms() const { return k_; }
  bool has_edge(int from, int to) const;
  bool has_self_loop(int v) const { return has_edge(v, v); }

  // Sorted, 1-indexed neighbor lists.
  const std::vector<int>& in_neighbors(int v) const;
  const std::vector<int>& out_neighbors(int v) const;

  // Edge list in lexicographic order, 1-indexed.
  std::vector<std::pair<int, int>> edges() const;

  // JSON object {"k": int, "edges": [[i, j], ...]} with 1-indexed vertices.
  static FeedbackGraph from_json_text(const std::string& text);
  std::string to_json_text() const;

  // Subgraph induced by the given vertices; vertex m of the result
  // corresponds to vertices[m-1] of this graph.
  FeedbackGraph induced_subgraph(const std::vector<int>& vertices) const;

 private:
  int k_ = 0;
  std::vector<std::vector<int>> in_;
  std::vector<std::vector<int>> out_;
  std::vector<char> adj_;  // dense K*K matrix, row = from
};

enum class Observability {
  kStronglyObservable,
  kWeaklyObservable,
  kUnobservable,
};

std::string to_string(Observability obs);

struct VertexObservability {
  bool has_self_loop = false;           // i in N_in(i)
  bool observed_by_all_others = false;  // V \ {i} subset of N_in(i)
  bool weakly_observable = false;       // neither strong condition, N_in nonempty
  bool unobserved = false;              // N_in(i) empty
};

struct ObservabilityReport {
  Observability tag = Observability::kUnobservable;
  std::vector<VertexObservability> vertex;  // index 0 is vertex 1

  // 1-indexed list of weakly observable vertices (the set W).
  std::vector<int> weakly_observable_vertices() const;
};

ObservabilityReport classify_observability(const FeedbackGraph& g);

// Which vertices a weakly dominating set must cover.
//   kNoSelfLoopTargets:        { i | i not in N_out(i) }
//   kWeaklyObservableTargets:  W, the weakly observable vertices
// The first is the primary definition; the second is the older variant kept
// for the at-most-one gap comparison between the two domination numbers.
enum class DominationRule {
  kNoSelfLoopTargets,
  kWeaklyObservableTargets,
};

std::string to_string(DominationRule rule);

// Sorted 1-indexed target set for the rule.
std::vector<int> domination_targets(const FeedbackGraph& g, DominationRule rule);

// Greedy set cover of the rule's target set: repeatedly pick the vertex whose
// out-neighborhood covers the most uncovered targets, ties broken by lowest
// vertex index. Size is within a factor (1 + ln |targets|) of the optimum.
// Returns the empty set when the target set is empty.
// Throws UncoverableTarget when some target vertex has no in-neighbor.
std::vector<int> weakly_dominating_set_greedy(const FeedbackGraph& g,
                                              DominationRule rule);

// Minimum-cardinality cover of the rule's target set by exhaustive subset
// enumeration in increasing size; lexicographically smallest among minimums.
// Throws TooLarge when K exceeds max_k.
std::vector<int> weakly_dominating_set_exact(const FeedbackGraph& g,
                                             DominationRule rule,
                                             int max_k = 16);

struct IndependenceBounds {
  int lower = 0;
  int upper = 0;
  std::optional<int> exact;
};

// Exact independence number by branch and bound over the undirected conflict
// graph: distinct u, v conflict iff (u,v) or (v,u) is an edge; self-loops
// never disqualify a vertex. Throws TooLarge beyond max_k.
IndependenceBounds independence_number_exact(const FeedbackGraph& g,
                                             int max_k = 20);

// Greedy minimum-degree bound: lower = greedy independent-set size,
// upper = K.
IndependenceBounds independence_number_greedy(const FeedbackGraph& g);

// V1 = union of out-neighborhoods of d, V2 = complement. When check_rule is
// kNoSelfLoopTargets, verifies that every V2 vertex has a self-loop and
// throws InvalidDominatingSet otherwise.
std::pair<std::vector<int>, std::vector<int>> partition_v1_v2(
    const FeedbackGraph& g, const std::vector<int>& d,
    std::optional<DominationRule> check_rule = std::nullopt);

struct GraphAnalysisOptions {
  DominationRule rule = DominationRule::kNoSelfLoopTargets;
  int exact_delta_cap = 16;
  int exact_alpha_cap = 20;
};

// Derived structure consumed by the policies.
struct GraphAnalysis {
  ObservabilityReport observability;
  DominationRule rule = DominationRule::kNoSelfLoopTargets;
  std::vector<int> dominating_set;  // D
  std::vector<int> v1;
  std::vector<int> v2;
  int delta_used = 0;  // |D|
  int k_prime = 0;     // |V2|
  int alpha_lower = 0;
  int alpha_upper = 0;
  std::optional<int> alpha_exact;
  std::optional<int> alpha2;  // independence number of the subgraph on V2
  bool dominating_set_is_exact = false;
};

// Bundles classification, dominating set (exact when K <= exact_delta_cap,
// greedy otherwise), the V1/V2 partition and independence bounds.
GraphAnalysis analyze_graph(const FeedbackGraph& g,
                            const GraphAnalysisOptions& options = {});

// Standard graph families. Spec strings: "bandit:K", "full_feedback:K",
// "loopless_clique:K", "revealing_action:K", "total_order:K",
// "random:K:p:seed".
FeedbackGraph make_bandit(int k);
FeedbackGraph make_full_feedback(int k);
FeedbackGraph make_loopless_clique(int k);
FeedbackGraph make_revealing_action(int k);
FeedbackGraph make_total_order(int k);
FeedbackGraph make_random(int k, double p, std::uint64_t seed);
FeedbackGraph graph_catalog(const std::string& spec);

}  // namespace graphbandit
