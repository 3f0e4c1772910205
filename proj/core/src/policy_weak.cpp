#include "graphbandit/policy_weak.hpp"

#include <algorithm>
#include <cmath>

#include "graphbandit/errors.hpp"
#include "graphbandit/feedback.hpp"

namespace graphbandit {

namespace {

constexpr double kGammaCap = 0.5;

void check_weak_preconditions(const FeedbackGraph& g,
                              const GraphAnalysis& analysis, double c1,
                              double c2) {
  if (analysis.observability.tag != Observability::kWeaklyObservable) {
    throw NotWeaklyObservable("weak policy needs a weakly observable graph");
  }
  if (analysis.dominating_set.empty()) {
    throw InvalidDominatingSet("weak policy needs a nonempty dominating set");
  }
  const auto targets = domination_targets(g, analysis.rule);
  std::vector<char> covered(g.num_arms() + 1, 0);
  for (int v : analysis.dominating_set) {
    if (v < 1 || v > g.num_arms()) {
      throw InvalidDominatingSet("dominating-set vertex out of range");
    }
    for (int w : g.out_neighbors(v)) covered[w] = 1;
  }
  for (int t : targets) {
    if (!covered[t]) {
      throw InvalidDominatingSet("dominating set misses target vertex " +
                                 std::to_string(t));
    }
  }
  const double min_c1 = 2.0 * std::log(static_cast<double>(g.num_arms()));
  if (!(c1 >= min_c1)) {
    throw BadParameter("weak policy needs c1 >= 2 ln K");
  }
  if (!(c2 > 0.0)) throw BadParameter("weak policy needs c2 > 0");
}

RegularizerSpec hybrid_spec(const GraphAnalysis& analysis, int k, double beta,
                            double v2_weight, RegKind v2_kind) {
  RegularizerSpec spec(static_cast<std::size_t>(k));
  for (int v : analysis.v1) {
    spec[static_cast<std::size_t>(v - 1)] = {RegKind::kShannonPair, beta};
  }
  for (int v : analysis.v2) {
    spec[static_cast<std::size_t>(v - 1)] = {v2_kind, v2_weight};
  }
  return spec;
}

}  // namespace

WeakPolicy::WeakPolicy(const FeedbackGraph& g, GraphAnalysis analysis,
                       double c1, double c2)
    : k_(g.num_arms()), analysis_(std::move(analysis)), c1_(c1), c2_(c2),
      dominating_size_(static_cast<int>(analysis_.dominating_set.size())),
      losses_(static_cast<std::size_t>(g.num_arms())) {
  check_weak_preconditions(g, analysis_, c1, c2);
  beta_ = std::max(c2_, 8.0 * dominating_size_);
}

Decision WeakPolicy::next() {
  if (awaiting_update_) {
    throw SequencingViolation("WeakPolicy::next called twice without update");
  }
  Decision d;
  d.q = solve_separable(
      losses_.values(),
      hybrid_spec(analysis_, k_, beta_, std::sqrt(static_cast<double>(t_)),
                  RegKind::kRootPair));

  const double a_t = pair_entropy_sum(d.q.p, analysis_.v1);
  const double b_t = pair_variance_sum(d.q.p, analysis_.v1);
  if (b_t == 0.0) {
    throw DegenerateGammaPrime("pair variance over V1 is exactly zero");
  }
  // a_t completes the s = t-1 term of Z = sum_s b_s a_{s+1} / gamma'_s.
  if (have_prev_ratio_) za_sum_.add(prev_ratio_ * a_t);
  b_sum_.add(b_t);

  const double ratio = 4.0 * (c1_ + std::cbrt(b_sum_.value())) / c1_;
  const double gamma_prime = b_t / ratio;
  double gamma = gamma_prime + 2.0 * dominating_size_ / beta_;
  if (gamma > kGammaCap) {
    gamma = kGammaCap;
    ++clip_events_;
  }
  d.gamma = gamma;
  d.gamma_prime = gamma_prime;
  d.beta = beta_;
  d.pair_entropy = a_t;
  d.pair_variance = b_t;
  d.p = mix_uniform(d.q, gamma, analysis_.dominating_set);
  d.estimate_bound = static_cast<double>(dominating_size_) / gamma;

  prev_ratio_ = ratio;
  current_ratio_ = ratio;
  have_prev_ratio_ = true;
  awaiting_update_ = true;
  return d;
}

void WeakPolicy::update(std::span<const double> loss_estimate) {
  if (!awaiting_update_) {
    throw SequencingViolation("WeakPolicy::update called before next");
  }
  if (static_cast<int>(loss_estimate.size()) != k_) {
    throw BadParameter("loss estimate size mismatch");
  }
  for (int i = 0; i < k_; ++i) {
    losses_.add(static_cast<std::size_t>(i), loss_estimate[i]);
  }
  // c2 b_t / (gamma'_t sqrt(c1 + Z_{t-1})) through the exact ratio.
  beta_ += c2_ * current_ratio_ / std::sqrt(c1_ + za_sum_.value());
  ++t_;
  awaiting_update_ = false;
}

std::pair<double, double> recommended_weak_params(int delta, int num_arms,
                                                  std::int64_t horizon) {
  if (delta < 1) throw BadParameter("delta must be >= 1");
  if (num_arms < 2) throw BadParameter("need at least 2 arms");
  if (horizon < 2) throw BadParameter("horizon must be >= 2");
  const double t = static_cast<double>(horizon);
  const double k = static_cast<double>(num_arms);
  const double d = static_cast<double>(delta);
  const double c1 =
      std::max(2.0 * std::log(k), std::cbrt(d * std::log(t) * std::log(k * t)));
  const double c2 = std::max(1.0, std::sqrt(d * std::log(t)));
  return {c1, c2};
}

WeakAltPolicy::WeakAltPolicy(const FeedbackGraph& g, GraphAnalysis analysis,
                             double c1_block1, double c2_block1,
                             double c1_block2)
    : k_(g.num_arms()), analysis_(std::move(analysis)),
      c1_block1_(c1_block1), c2_block1_(c2_block1), c1_block2_(c1_block2),
      log_k_(std::log(static_cast<double>(g.num_arms()))),
      dominating_size_(static_cast<int>(analysis_.dominating_set.size())),
      losses_(static_cast<std::size_t>(g.num_arms())) {
  check_weak_preconditions(g, analysis_, c1_block1, c2_block1);
  if (analysis_.v2.empty()) {
    throw EmptyV2("two-block weak policy needs a nonempty V2");
  }
  if (!(c1_block2 >= 1.0)) throw BadParameter("block-2 rate needs c1 >= 1");
  beta1_ = std::max(c2_block1_, 8.0 * dominating_size_);
  beta2_ = c1_block2_;
}

Decision WeakAltPolicy::next() {
  if (awaiting_update_) {
    throw SequencingViolation("WeakAltPolicy::next called twice without update");
  }
  Decision d;
  d.q = solve_separable(losses_.values(),
                        hybrid_spec(analysis_, k_, beta1_, beta2_,
                                    RegKind::kShannonPair));

  const double a1_t = pair_entropy_sum(d.q.p, analysis_.v1);
  const double b1_t = pair_variance_sum(d.q.p, analysis_.v1);
  if (b1_t == 0.0) {
    throw DegenerateGammaPrime("pair variance over V1 is exactly zero");
  }
  if (have_prev_ratio_) za_sum_.add(prev_ratio_ * a1_t);
  b_sum_.add(b1_t);

  const double ratio = 4.0 * (c1_block1_ + std::cbrt(b_sum_.value())) / c1_block1_;
  const double gamma_prime = b1_t / ratio;
  const double gamma1 = gamma_prime + 2.0 * dominating_size_ / beta1_;
  double gamma2 = 0.5 / beta2_;
  if (gamma1 + gamma2 > kGammaCap) {
    gamma2 = kGammaCap - gamma1;  // gamma1 < 1/2 strictly, so gamma2 > 0
    ++clip_events_;
  }

  d.gamma = gamma1 + gamma2;
  d.gamma_prime = gamma_prime;
  d.beta = beta1_;
  d.beta2 = beta2_;
  d.pair_entropy = a1_t;
  d.pair_variance = b1_t;
  // p = (1 - gamma1 - gamma2) q + gamma1 mu_D + gamma2 mu_V2.
  d.p = d.q;
  for (double& x : d.p.p) x *= 1.0 - gamma1 - gamma2;
  for (int v : analysis_.dominating_set) {
    d.p.p[static_cast<std::size_t>(v - 1)] += gamma1 / dominating_size_;
  }
  for (int v : analysis_.v2) {
    d.p.p[static_cast<std::size_t>(v - 1)] +=
        gamma2 / static_cast<double>(analysis_.v2.size());
  }
  d.estimate_bound = static_cast<double>(dominating_size_) / gamma1;

  pending_entropy2_ = pair_entropy_sum(d.q.p, analysis_.v2);
  prev_ratio_ = ratio;
  current_ratio_ = ratio;
  have_prev_ratio_ = true;
  awaiting_update_ = true;
  return d;
}

void WeakAltPolicy::update(std::span<const double> loss_estimate) {
  if (!awaiting_update_) {
    throw SequencingViolation("WeakAltPolicy::update called before next");
  }
  if (static_cast<int>(loss_estimate.size()) != k_) {
    throw BadParameter("loss estimate size mismatch");
  }
  for (int i = 0; i < k_; ++i) {
    losses_.add(static_cast<std::size_t>(i), loss_estimate[i]);
  }
  beta1_ += c2_block1_ * current_ratio_ / std::sqrt(c1_block1_ + za_sum_.value());
  entropy2_sum_.add(pending_entropy2_);
  beta2_ += c1_block2_ / std::sqrt(1.0 + entropy2_sum_.value() / log_k_);
  ++t_;
  awaiting_update_ = false;
}

}  // namespace graphbandit
