#pragma once

#include <utility>
#include <vector>

#include "graphbandit/ftrl.hpp"
#include "graphbandit/graph.hpp"

namespace graphbandit {

// The slice of the loss vector revealed by playing chosen_arm: exactly the
// pairs (j, loss_t(j)) for j in N_out(chosen_arm). Keeping the reveal
// explicit is what prevents unobserved loss entries from leaking into
// policies.
struct RoundObservation {
  int chosen_arm = 0;
  std::vector<std::pair<int, double>> observed;  // 1-indexed arm, loss
};

// Importance-weighted unbiased loss estimate:
//   values[i] = loss(i) / prob[i] if i in N_out(chosen_arm), else 0.
struct EstimatedLoss {
  std::vector<double> values;
  std::vector<double> obs_prob;
};

// P_t(i) = sum_{j in N_in(i)} p_t(j).
std::vector<double> observation_probabilities(const FeedbackGraph& g,
                                              const SimplexPoint& p);

// Builds the reveal slice for an action from the full loss vector.
RoundObservation reveal(const FeedbackGraph& g, int chosen_arm,
                        std::span<const double> full_losses);

// Throws ZeroObservationProbability when an observed vertex has P_t = 0,
// which indicates a policy/graph wiring bug.
EstimatedLoss estimate_losses(const FeedbackGraph& g, const SimplexPoint& p,
                              const RoundObservation& obs);

}  // namespace graphbandit
