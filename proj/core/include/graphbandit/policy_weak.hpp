#pragma once

#include <cstdint>
#include <utility>

#include "graphbandit/graph.hpp"
#include "graphbandit/numeric.hpp"
#include "graphbandit/policy.hpp"

namespace graphbandit {

// Hybrid FTRL for weakly observable graphs: pair-Shannon regularization with
// weight beta_t on V1 and root-pair regularization with weight sqrt(t) on V2,
// uniform mixing over the weakly dominating set D.
//
// Parameter recurrences, with a_t / b_t the pair entropy / pair variance of
// q_t over V1:
//   beta_1   = max(c2, 8 |D|)
//   gamma'_t = (1/4) c1 b_t / (c1 + (sum_{s<=t} b_s)^{1/3})
//   gamma_t  = gamma'_t + 2 |D| / beta_t           (clipped at 1/2, counted)
//   beta_{t+1} = beta_t + c2 b_t / (gamma'_t sqrt(c1 + Z_{t-1})),
//     Z_{t-1} = sum_{s<=t-1} b_s a_{s+1} / gamma'_s.
//
// Since b_s / gamma'_s = 4 (c1 + B_s^{1/3}) / c1 identically, both the beta
// increment and the Z terms are computed through that ratio, which is also
// the continuous extension at b_s = 0.
//
// Per-round order: solve q_t with beta_t -> record a_t, completing the
// s = t-1 term of Z -> compute gamma'_t, gamma_t and act -> (update) fold in
// the loss estimate and compute beta_{t+1}.
class WeakPolicy : public Policy {
 public:
  WeakPolicy(const FeedbackGraph& g, GraphAnalysis analysis, double c1,
             double c2);

  Decision next() override;
  void update(std::span<const double> loss_estimate) override;

  int num_arms() const override { return k_; }
  std::string_view name() const override { return "weak"; }
  std::int64_t clip_events() const override { return clip_events_; }

  int round() const { return t_; }
  double beta() const { return beta_; }
  double c1() const { return c1_; }
  double c2() const { return c2_; }
  double b_sum() const { return b_sum_.value(); }
  double za_sum() const { return za_sum_.value(); }
  const GraphAnalysis& analysis() const { return analysis_; }
  std::vector<double> cumulative_loss() const { return losses_.values(); }

 private:
  int k_;
  GraphAnalysis analysis_;
  double c1_;
  double c2_;
  int dominating_size_;
  int t_ = 1;
  double beta_;
  CompensatedSum b_sum_;
  CompensatedSum za_sum_;  // Z: sum of b_s a_{s+1} / gamma'_s
  CompensatedVector losses_;
  std::int64_t clip_events_ = 0;
  bool awaiting_update_ = false;
  bool have_prev_ratio_ = false;
  double prev_ratio_ = 0.0;     // b_{t-1} / gamma'_{t-1}, awaiting a_t
  double current_ratio_ = 0.0;  // b_t / gamma'_t for the beta update
};

// (c1, c2) = (max(2 ln K, (delta ln T ln(KT))^{1/3}), max(1, sqrt(delta ln T))),
// Theta-constants fixed to 1.
std::pair<double, double> recommended_weak_params(int delta, int num_arms,
                                                  std::int64_t horizon);

// Two-block variant for weakly observable graphs with nonempty V2:
// pair-Shannon on V1 with the WeakPolicy recurrences (c1_block1, c2_block1)
// and pair-Shannon on V2 with the StrongPolicy recurrence (c1_block2, a_s
// taken as the pair entropy over V2). The mix spreads gamma1 over D and
// gamma2 over V2; gamma1 + gamma2 is kept at or below 1/2 by capping gamma2,
// which preserves gamma1 >= 2 |D| / beta1.
class WeakAltPolicy : public Policy {
 public:
  WeakAltPolicy(const FeedbackGraph& g, GraphAnalysis analysis,
                double c1_block1, double c2_block1, double c1_block2);

  Decision next() override;
  void update(std::span<const double> loss_estimate) override;

  int num_arms() const override { return k_; }
  std::string_view name() const override { return "weak_alt"; }
  std::int64_t clip_events() const override { return clip_events_; }

  int round() const { return t_; }
  double beta1() const { return beta1_; }
  double beta2() const { return beta2_; }
  const GraphAnalysis& analysis() const { return analysis_; }

 private:
  int k_;
  GraphAnalysis analysis_;
  double c1_block1_;
  double c2_block1_;
  double c1_block2_;
  double log_k_;
  int dominating_size_;
  int t_ = 1;
  double beta1_;
  double beta2_;
  CompensatedSum b_sum_;
  CompensatedSum za_sum_;
  CompensatedSum entropy2_sum_;
  CompensatedVector losses_;
  std::int64_t clip_events_ = 0;
  bool awaiting_update_ = false;
  bool have_prev_ratio_ = false;
  double prev_ratio_ = 0.0;
  double current_ratio_ = 0.0;
  double pending_entropy2_ = 0.0;
};

}  // namespace graphbandit
