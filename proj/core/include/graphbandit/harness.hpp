#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "graphbandit/environment.hpp"
#include "graphbandit/feedback.hpp"
#include "graphbandit/graph.hpp"
#include "graphbandit/numeric.hpp"
#include "graphbandit/policy.hpp"

namespace graphbandit {

enum class TraceLevel { kNone, kSummary, kFull };

enum class PolicyKind { kStrong, kWeak, kWeakAlt, kExp3G };

std::string to_string(PolicyKind kind);
std::string to_string(TraceLevel level);

// Fully resolved policy parameters; "auto" has already been replaced by
// concrete numbers at config-resolution time.
struct PolicyConfig {
  PolicyKind kind = PolicyKind::kStrong;
  double c1 = 1.0;          // strong c1 / weak c1 / exp3g unused
  double c2 = 1.0;          // weak only
  double c1_block2 = 1.0;   // weak_alt second block
  double alpha = 1.0;       // exp3g and c1 resolution
};

// A resolved, runnable (graph, policy, environment) cell.
struct RunConfig {
  FeedbackGraph graph;
  GraphAnalysis analysis;
  PolicyConfig policy;
  EnvironmentSpec environment;
  std::int64_t horizon = 0;
  TraceLevel trace_level = TraceLevel::kSummary;
  bool check_invariants = false;
  std::string config_id = "run";
  std::string group_id = "run";  // cells sharing a group differ only in T
};

// Per-round record of one episode plus totals. Scalar diagnostics are NaN
// where a policy does not produce them.
struct Trace {
  std::int64_t horizon = 0;
  int num_arms = 0;
  int optimal_arm = 0;  // 0 when the environment has no ground truth
  std::vector<int> arms;
  std::vector<double> incurred;
  std::vector<double> gamma;
  std::vector<double> beta;
  std::vector<double> beta2;
  std::vector<double> gamma_prime;
  std::vector<double> entropy;        // H(q_t)
  std::vector<double> pair_entropy;   // a_t over V1 (weak policies)
  std::vector<double> pair_variance;  // b_t over V1 (weak policies)
  std::vector<double> q_opt;          // q_t(i*) when i* is known
  std::vector<std::vector<double>> q_full;  // TraceLevel::kFull only
  std::vector<std::vector<double>> p_full;
  std::vector<double> arm_loss_totals;  // realized sum_t loss_t(i)
  double cumulative_loss = 0.0;
  double realized_corruption = 0.0;
  std::int64_t clip_events = 0;
};

std::unique_ptr<Policy> make_policy(const RunConfig& config);

// Test seam: mutates the full loss vector after the action is sampled but
// before the reveal; used to prove unobserved entries never reach a policy.
using LossTamper =
    std::function<void(std::int64_t t, int chosen_arm, std::vector<double>&)>;

// Plays the protocol loop for `horizon` rounds: policy emits p_t, the action
// is sampled by inverse CDF from a dedicated counter stream, the environment
// emits the full loss vector, only the N_out(I_t) slice is revealed, the
// importance-weighted estimate is fed back. Deterministic in (config, seed).
Trace run_episode(const RunConfig& config, std::uint64_t seed,
                  const LossTamper& tamper = {});

// Sum of true gaps of the played arms. Throws NoGroundTruth for adversarial
// environments.
double pseudo_regret(const Trace& trace, const Environment& env);

// Realized regret against the best fixed arm of the realized loss sequence;
// the standard empirical surrogate when no ground truth exists.
double realized_regret(const Trace& trace);

// final regret used in result tables: pseudo-regret when ground truth
// exists, realized best-fixed-arm regret otherwise.
double final_regret(const Trace& trace, const Environment& env);

// Per-round mean regret curve with standard errors across traces.
struct RegretCurve {
  std::vector<double> mean;
  std::vector<double> stderr_;
};
RegretCurve empirical_regret_curve(const std::vector<Trace>& traces,
                                   const Environment& env);

// Q(i*) = sum_t (1 - q_t(i*)) plus the per-round series. Requires either a
// recorded q_opt for that arm or a full trace.
struct QSeries {
  double total = 0.0;
  std::vector<double> per_round;  // 1 - q_t(i*)
};
QSeries q_quantity(const Trace& trace, int i_star);

// Exp3.G comparison baseline: round-independent
// gamma = min(sqrt(1 / (alpha T)), 1/2) and beta = 1 / (2 gamma).
class Exp3GPolicy : public Policy {
 public:
  Exp3GPolicy(const FeedbackGraph& g, double alpha, std::int64_t horizon);

  Decision next() override;
  void update(std::span<const double> loss_estimate) override;
  int num_arms() const override { return k_; }
  std::string_view name() const override { return "exp3g"; }

  double gamma() const { return gamma_; }
  double beta() const { return beta_; }

 private:
  int k_;
  double gamma_;
  double beta_;
  CompensatedVector losses_;
  bool awaiting_update_ = false;
};

// One sweep row per (cell, seed).
struct RunResult {
  std::string config_id;
  std::string group_id;
  std::uint64_t seed = 0;
  std::int64_t horizon = 0;
  double final_regret = 0.0;
  double final_q = std::numeric_limits<double>::quiet_NaN();
  std::int64_t clip_events = 0;
  double cumulative_loss = 0.0;
  double realized_corruption = 0.0;
  bool failed = false;
  std::string error;
};

struct CellAggregate {
  std::string config_id;
  std::string group_id;
  std::int64_t horizon = 0;
  int seeds = 0;
  double mean_regret = 0.0;
  double stderr_regret = 0.0;
};

struct ScalingFit {
  std::string group_id;
  double loglog_slope = 0.0;
  int cells = 0;
};

struct SweepResult {
  std::vector<RunResult> rows;
  std::vector<CellAggregate> cells;
  std::vector<ScalingFit> fits;
};

// Cross product of cells x seeds with the given parallelism. Per-cell
// failures are recorded in the row and the sweep continues.
SweepResult sweep(const std::vector<RunConfig>& cells,
                  const std::vector<std::uint64_t>& seeds, int parallelism);

// Least-squares slope of ln(regret) against ln(T).
double loglog_slope(const std::vector<std::pair<double, double>>& t_regret);

}  // namespace graphbandit
