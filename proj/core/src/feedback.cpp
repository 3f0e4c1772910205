#include "graphbandit/feedback.hpp"

#include <string>

#include "graphbandit/errors.hpp"

namespace graphbandit {

std::vector<double> observation_probabilities(const FeedbackGraph& g,
                                              const SimplexPoint& p) {
  if (p.size() != g.num_arms()) throw BadParameter("p/graph size mismatch");
  std::vector<double> obs(p.p.size(), 0.0);
  for (int i = 1; i <= g.num_arms(); ++i) {
    double sum = 0.0;
    for (int j : g.in_neighbors(i)) sum += p[j - 1];
    obs[static_cast<std::size_t>(i - 1)] = sum;
  }
  return obs;
}

RoundObservation reveal(const FeedbackGraph& g, int chosen_arm,
                        std::span<const double> full_losses) {
  if (static_cast<int>(full_losses.size()) != g.num_arms()) {
    throw BadParameter("loss/graph size mismatch");
  }
  RoundObservation obs;
  obs.chosen_arm = chosen_arm;
  for (int j : g.out_neighbors(chosen_arm)) {
    obs.observed.emplace_back(j, full_losses[static_cast<std::size_t>(j - 1)]);
  }
  return obs;
}

EstimatedLoss estimate_losses(const FeedbackGraph& g, const SimplexPoint& p,
                              const RoundObservation& obs) {
  EstimatedLoss est;
  est.obs_prob = observation_probabilities(g, p);
  est.values.assign(p.p.size(), 0.0);
  for (const auto& [arm, loss] : obs.observed) {
    const double prob = est.obs_prob[static_cast<std::size_t>(arm - 1)];
    if (!(prob > 0.0)) {
      throw ZeroObservationProbability(
          "observed arm " + std::to_string(arm) +
          " has zero observation probability");
    }
    est.values[static_cast<std::size_t>(arm - 1)] = loss / prob;
  }
  return est;
}

}  // namespace graphbandit
