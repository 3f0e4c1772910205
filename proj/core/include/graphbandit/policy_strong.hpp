#pragma once

#include <cstdint>

#include "graphbandit/graph.hpp"
#include "graphbandit/numeric.hpp"
#include "graphbandit/policy.hpp"

namespace graphbandit {

// FTRL with full Shannon-entropy regularization and uniform mixing over all
// arms; the learning rate beta_t grows by c1 / sqrt(1 + (ln K)^{-1} sum a_s)
// with a_s the entropy of q_s, and gamma_t = 1 / (2 beta_t). Requires a
// strongly observable graph and c1 >= 1.
class StrongPolicy : public Policy {
 public:
  StrongPolicy(const FeedbackGraph& g, double c1);

  Decision next() override;
  void update(std::span<const double> loss_estimate) override;

  int num_arms() const override { return k_; }
  std::string_view name() const override { return "strong"; }

  int round() const { return t_; }
  double beta() const { return beta_; }
  double gamma() const { return 0.5 / beta_; }
  double c1() const { return c1_; }
  double entropy_sum() const { return entropy_sum_.value(); }
  std::vector<double> cumulative_loss() const { return losses_.values(); }

 private:
  int k_;
  double c1_;
  double log_k_;
  int t_ = 1;
  double beta_;
  CompensatedSum entropy_sum_;
  CompensatedVector losses_;
  bool awaiting_update_ = false;
  double pending_entropy_ = 0.0;
};

// c1 = max(1, sqrt(alpha * ln T * ln(K T) / ln K)); the Theta-constant is
// fixed to 1 and exposed to callers as a plain multiplier on the result.
double recommended_c1(double alpha, int num_arms, std::int64_t horizon);

}  // namespace graphbandit
