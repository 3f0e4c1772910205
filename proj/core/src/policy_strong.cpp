#include "graphbandit/policy_strong.hpp"

#include <cmath>

#include "graphbandit/errors.hpp"

namespace graphbandit {

StrongPolicy::StrongPolicy(const FeedbackGraph& g, double c1)
    : k_(g.num_arms()), c1_(c1), log_k_(std::log(static_cast<double>(k_))),
      beta_(c1), losses_(static_cast<std::size_t>(g.num_arms())) {
  if (classify_observability(g).tag != Observability::kStronglyObservable) {
    throw NotStronglyObservable("strong policy needs a strongly observable graph");
  }
  if (!(c1 >= 1.0)) throw BadParameter("strong policy needs c1 >= 1");
}

Decision StrongPolicy::next() {
  if (awaiting_update_) {
    throw SequencingViolation("StrongPolicy::next called twice without update");
  }
  Decision d;
  d.q = solve_shannon(losses_.values(), beta_);
  d.gamma = 0.5 / beta_;
  d.p = mix_uniform(d.q, d.gamma);
  d.beta = beta_;
  d.estimate_bound = static_cast<double>(k_) / d.gamma;
  pending_entropy_ = shannon_entropy(d.q.p);
  awaiting_update_ = true;
  return d;
}

void StrongPolicy::update(std::span<const double> loss_estimate) {
  if (!awaiting_update_) {
    throw SequencingViolation("StrongPolicy::update called before next");
  }
  if (static_cast<int>(loss_estimate.size()) != k_) {
    throw BadParameter("loss estimate size mismatch");
  }
  // a_t enters the beta recurrence for the same round: the sum under the
  // square root runs s = 1..t inclusive.
  entropy_sum_.add(pending_entropy_);
  beta_ += c1_ / std::sqrt(1.0 + entropy_sum_.value() / log_k_);
  for (int i = 0; i < k_; ++i) {
    losses_.add(static_cast<std::size_t>(i), loss_estimate[i]);
  }
  ++t_;
  awaiting_update_ = false;
}

double recommended_c1(double alpha, int num_arms, std::int64_t horizon) {
  if (!(alpha >= 1.0)) throw BadParameter("alpha must be >= 1");
  if (num_arms < 2) throw BadParameter("need at least 2 arms");
  if (horizon < 2) throw BadParameter("horizon must be >= 2");
  const double t = static_cast<double>(horizon);
  const double k = static_cast<double>(num_arms);
  const double value =
      std::sqrt(alpha * std::log(t) * std::log(k * t) / std::log(k));
  return std::max(1.0, value);
}

}  // namespace graphbandit
