#include "graphbandit/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "graphbandit/errors.hpp"
#include "graphbandit/numeric.hpp"
#include "graphbandit/policy_strong.hpp"
#include "graphbandit/policy_weak.hpp"

namespace graphbandit {

namespace {

constexpr std::uint64_t kActionStream = 202;

int sample_inverse_cdf(const SimplexPoint& p, double u) {
  double cum = 0.0;
  for (int i = 0; i < p.size(); ++i) {
    cum += p[i];
    if (u < cum) return i + 1;
  }
  return p.size();  // float guard
}

// Entropy bound from the self-bounding analysis:
// H(p) <= (1 - p(i*)) (ln((K-1)/(1 - p(i*))) + 1) for every i*.
double entropy_bound(double mass_elsewhere, int k) {
  if (mass_elsewhere <= 0.0) return 0.0;
  return mass_elsewhere *
         (std::log(static_cast<double>(k - 1) / mass_elsewhere) + 1.0);
}

struct InvariantContext {
  const RunConfig* config = nullptr;
  double prev_beta = -1.0;
  double prev_beta2 = -1.0;
};

void check_round_invariants(InvariantContext& ctx, std::int64_t t,
                            const Decision& d,
                            const std::vector<double>& estimates) {
  const RunConfig& cfg = *ctx.config;
  auto fail = [&](const std::string& what) {
    throw Error("round " + std::to_string(t) + " invariant violation: " + what);
  };
  if (!d.q.is_valid(1e-9)) fail("q_t is not a valid simplex point");
  if (!d.p.is_valid(1e-9)) fail("p_t is not a valid simplex point");
  if (!(d.gamma > 0.0 && d.gamma <= 0.5 + 1e-15)) fail("gamma outside (0, 1/2]");
  if (!std::isnan(d.beta)) {
    if (ctx.prev_beta > 0.0 && !(d.beta >= ctx.prev_beta)) fail("beta decreased");
    ctx.prev_beta = d.beta;
  }
  if (!std::isnan(d.beta2)) {
    if (ctx.prev_beta2 > 0.0 && !(d.beta2 >= ctx.prev_beta2)) fail("beta2 decreased");
    ctx.prev_beta2 = d.beta2;
  }
  const int k = d.q.size();
  const double entropy = shannon_entropy(d.q.p);
  for (int i = 0; i < k; ++i) {
    if (entropy > entropy_bound(1.0 - d.q[i], k) + 1e-9) {
      fail("entropy bound exceeded at arm " + std::to_string(i + 1));
    }
  }
  const bool weak_kind = cfg.policy.kind == PolicyKind::kWeak ||
                         cfg.policy.kind == PolicyKind::kWeakAlt;
  if (weak_kind) {
    if (!(d.pair_entropy >= d.pair_variance - 1e-12)) fail("a_t < b_t");
    const auto& dset = cfg.analysis.dominating_set;
    const double dsize = static_cast<double>(dset.size());
    if (cfg.policy.kind == PolicyKind::kWeak) {
      if (!(d.gamma >= 2.0 * dsize / d.beta - 1e-15)) {
        fail("gamma below 2|D|/beta");
      }
    }
    double floor = d.gamma / dsize;
    if (cfg.policy.kind == PolicyKind::kWeakAlt) {
      // Only the D-share of the mixture is guaranteed for the floor.
      floor = (d.gamma_prime + 2.0 * dsize / d.beta) / dsize;
    }
    for (int v : dset) {
      if (!(d.p[v - 1] >= floor - 1e-12)) fail("p floor violated on D");
    }
    // Every arm of V1 is observed whenever an arm of D is played.
    const auto obs = observation_probabilities(cfg.graph, d.p);
    for (int v : cfg.analysis.v1) {
      if (!(obs[static_cast<std::size_t>(v - 1)] >= floor - 1e-12)) {
        fail("observation probability below gamma/|D| on V1");
      }
    }
    for (int v : cfg.analysis.v1) {
      if (!(estimates[static_cast<std::size_t>(v - 1)] <=
            dsize / (d.gamma_prime + 2.0 * dsize / d.beta) + 1e-9)) {
        fail("loss estimate above |D|/gamma on V1");
      }
    }
  } else {
    const double floor = d.gamma / static_cast<double>(k);
    for (int i = 0; i < k; ++i) {
      if (!(d.p[i] >= floor - 1e-15)) fail("p floor violated");
    }
    for (int i = 0; i < k; ++i) {
      if (!(estimates[static_cast<std::size_t>(i)] <= d.estimate_bound + 1e-9)) {
        fail("loss estimate above K/gamma");
      }
    }
  }
}

}  // namespace

std::string to_string(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::kStrong: return "strong";
    case PolicyKind::kWeak: return "weak";
    case PolicyKind::kWeakAlt: return "weak_alt";
    case PolicyKind::kExp3G: return "exp3g";
  }
  return "unknown";
}

std::string to_string(TraceLevel level) {
  switch (level) {
    case TraceLevel::kNone: return "none";
    case TraceLevel::kSummary: return "summary";
    case TraceLevel::kFull: return "full";
  }
  return "unknown";
}

std::unique_ptr<Policy> make_policy(const RunConfig& config) {
  switch (config.policy.kind) {
    case PolicyKind::kStrong:
      return std::make_unique<StrongPolicy>(config.graph, config.policy.c1);
    case PolicyKind::kWeak:
      return std::make_unique<WeakPolicy>(config.graph, config.analysis,
                                          config.policy.c1, config.policy.c2);
    case PolicyKind::kWeakAlt:
      return std::make_unique<WeakAltPolicy>(
          config.graph, config.analysis, config.policy.c1, config.policy.c2,
          config.policy.c1_block2);
    case PolicyKind::kExp3G:
      return std::make_unique<Exp3GPolicy>(config.graph, config.policy.alpha,
                                           config.horizon);
  }
  throw BadParameter("unknown policy kind");
}

Trace run_episode(const RunConfig& config, std::uint64_t seed,
                  const LossTamper& tamper) {
  if (config.horizon < 1) throw BadParameter("horizon must be >= 1");
  auto policy = make_policy(config);
  Environment env(config.environment, config.graph.num_arms(), seed);

  Trace trace;
  trace.horizon = config.horizon;
  trace.num_arms = config.graph.num_arms();
  const auto gt = env.ground_truth();
  trace.optimal_arm = gt ? gt->optimal_arm : 0;

  const bool per_round = config.trace_level != TraceLevel::kNone;
  const std::size_t reserve =
      per_round ? static_cast<std::size_t>(config.horizon) : 0;
  trace.arms.reserve(static_cast<std::size_t>(config.horizon));
  trace.incurred.reserve(static_cast<std::size_t>(config.horizon));
  trace.gamma.reserve(reserve);
  trace.beta.reserve(reserve);
  trace.entropy.reserve(reserve);
  trace.arm_loss_totals.assign(static_cast<std::size_t>(trace.num_arms), 0.0);

  InvariantContext inv_ctx;
  inv_ctx.config = &config;
  CompensatedSum cumulative;

  for (std::int64_t t = 1; t <= config.horizon; ++t) {
    Decision d = policy->next();
    const double u = counter_uniform(seed, kActionStream,
                                     static_cast<std::uint64_t>(t), 0);
    const int arm = sample_inverse_cdf(d.p, u);

    std::vector<double> losses = env.losses(t);
    if (tamper) tamper(t, arm, losses);
    const double incurred = losses[static_cast<std::size_t>(arm - 1)];
    for (int i = 0; i < trace.num_arms; ++i) {
      trace.arm_loss_totals[static_cast<std::size_t>(i)] += losses[static_cast<std::size_t>(i)];
    }

    // Only the out-neighborhood slice leaves the harness.
    const RoundObservation obs = reveal(config.graph, arm, losses);
    const EstimatedLoss est = estimate_losses(config.graph, d.p, obs);
    if (config.check_invariants) {
      check_round_invariants(inv_ctx, t, d, est.values);
    }
    policy->update(est.values);

    cumulative.add(incurred);
    trace.arms.push_back(arm);
    trace.incurred.push_back(incurred);
    if (per_round) {
      trace.gamma.push_back(d.gamma);
      trace.beta.push_back(d.beta);
      trace.beta2.push_back(d.beta2);
      trace.gamma_prime.push_back(d.gamma_prime);
      trace.entropy.push_back(shannon_entropy(d.q.p));
      trace.pair_entropy.push_back(d.pair_entropy);
      trace.pair_variance.push_back(d.pair_variance);
      trace.q_opt.push_back(trace.optimal_arm > 0 ? d.q[trace.optimal_arm - 1]
                                                  : std::numeric_limits<double>::quiet_NaN());
      if (config.trace_level == TraceLevel::kFull) {
        trace.q_full.push_back(d.q.p);
        trace.p_full.push_back(d.p.p);
      }
    }
  }
  trace.cumulative_loss = cumulative.value();
  trace.realized_corruption = env.realized_corruption(config.horizon);
  trace.clip_events = policy->clip_events();
  return trace;
}

double pseudo_regret(const Trace& trace, const Environment& env) {
  const auto gt = env.ground_truth();
  if (!gt) {
    throw NoGroundTruth("pseudo-regret needs a stochastic or corrupted environment");
  }
  CompensatedSum total;
  for (int arm : trace.arms) total.add(gt->gaps[static_cast<std::size_t>(arm - 1)]);
  return total.value();
}

double realized_regret(const Trace& trace) {
  if (trace.arm_loss_totals.empty()) {
    throw MissingTraceField("trace lacks per-arm loss totals");
  }
  const double best = *std::min_element(trace.arm_loss_totals.begin(),
                                        trace.arm_loss_totals.end());
  return trace.cumulative_loss - best;
}

double final_regret(const Trace& trace, const Environment& env) {
  return env.ground_truth() ? pseudo_regret(trace, env) : realized_regret(trace);
}

RegretCurve empirical_regret_curve(const std::vector<Trace>& traces,
                                   const Environment& env) {
  if (traces.empty()) throw BadParameter("no traces");
  const auto gt = env.ground_truth();
  if (!gt) throw NoGroundTruth("regret curves need gap ground truth");
  const std::size_t horizon = traces[0].arms.size();
  RegretCurve curve;
  curve.mean.assign(horizon, 0.0);
  curve.stderr_.assign(horizon, 0.0);
  std::vector<std::vector<double>> partial(traces.size());
  for (std::size_t s = 0; s < traces.size(); ++s) {
    if (traces[s].arms.size() != horizon) throw BadParameter("trace length mismatch");
    partial[s].resize(horizon);
    double acc = 0.0;
    for (std::size_t t = 0; t < horizon; ++t) {
      acc += gt->gaps[static_cast<std::size_t>(traces[s].arms[t] - 1)];
      partial[s][t] = acc;
    }
  }
  const double n = static_cast<double>(traces.size());
  for (std::size_t t = 0; t < horizon; ++t) {
    double mean = 0.0;
    for (const auto& p : partial) mean += p[t];
    mean /= n;
    double var = 0.0;
    for (const auto& p : partial) var += (p[t] - mean) * (p[t] - mean);
    curve.mean[t] = mean;
    curve.stderr_[t] = traces.size() > 1 ? std::sqrt(var / (n - 1.0) / n) : 0.0;
  }
  return curve;
}

QSeries q_quantity(const Trace& trace, int i_star) {
  QSeries series;
  series.per_round.reserve(static_cast<std::size_t>(trace.horizon));
  CompensatedSum total;
  if (i_star == trace.optimal_arm && !trace.q_opt.empty()) {
    for (double q : trace.q_opt) {
      if (std::isnan(q)) throw MissingTraceField("trace lacks q_t(i*)");
      series.per_round.push_back(1.0 - q);
      total.add(1.0 - q);
    }
  } else if (!trace.q_full.empty()) {
    for (const auto& q : trace.q_full) {
      series.per_round.push_back(1.0 - q[static_cast<std::size_t>(i_star - 1)]);
      total.add(series.per_round.back());
    }
  } else {
    throw MissingTraceField("trace lacks q_t for the requested arm");
  }
  series.total = total.value();
  return series;
}

Exp3GPolicy::Exp3GPolicy(const FeedbackGraph& g, double alpha,
                         std::int64_t horizon)
    : k_(g.num_arms()), losses_(static_cast<std::size_t>(g.num_arms())) {
  if (classify_observability(g).tag != Observability::kStronglyObservable) {
    throw NotStronglyObservable("Exp3.G baseline needs a strongly observable graph");
  }
  if (!(alpha >= 1.0)) throw BadParameter("alpha must be >= 1");
  if (horizon < 1) throw BadParameter("horizon must be >= 1");
  gamma_ = std::min(std::sqrt(1.0 / (alpha * static_cast<double>(horizon))), 0.5);
  beta_ = 0.5 / gamma_;
}

Decision Exp3GPolicy::next() {
  if (awaiting_update_) {
    throw SequencingViolation("Exp3GPolicy::next called twice without update");
  }
  Decision d;
  d.q = solve_shannon(losses_.values(), beta_);
  d.gamma = gamma_;
  d.p = mix_uniform(d.q, gamma_);
  d.beta = beta_;
  d.estimate_bound = static_cast<double>(k_) / gamma_;
  awaiting_update_ = true;
  return d;
}

void Exp3GPolicy::update(std::span<const double> loss_estimate) {
  if (!awaiting_update_) {
    throw SequencingViolation("Exp3GPolicy::update called before next");
  }
  if (static_cast<int>(loss_estimate.size()) != k_) {
    throw BadParameter("loss estimate size mismatch");
  }
  for (int i = 0; i < k_; ++i) {
    losses_.add(static_cast<std::size_t>(i), loss_estimate[i]);
  }
  awaiting_update_ = false;
}

SweepResult sweep(const std::vector<RunConfig>& cells,
                  const std::vector<std::uint64_t>& seeds, int parallelism) {
  SweepResult result;
  const std::size_t jobs = cells.size() * seeds.size();
  result.rows.resize(jobs);

  std::atomic<std::size_t> cursor{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t j = cursor.fetch_add(1);
      if (j >= jobs) return;
      const RunConfig& cell = cells[j / seeds.size()];
      const std::uint64_t seed = seeds[j % seeds.size()];
      RunResult row;
      row.config_id = cell.config_id;
      row.group_id = cell.group_id;
      row.seed = seed;
      row.horizon = cell.horizon;
      try {
        const Trace trace = run_episode(cell, seed);
        Environment env(cell.environment, cell.graph.num_arms(), seed);
        row.final_regret = final_regret(trace, env);
        row.cumulative_loss = trace.cumulative_loss;
        row.clip_events = trace.clip_events;
        row.realized_corruption = trace.realized_corruption;
        if (trace.optimal_arm > 0 && !trace.q_opt.empty()) {
          row.final_q = q_quantity(trace, trace.optimal_arm).total;
        }
      } catch (const std::exception& e) {
        row.failed = true;
        row.error = e.what();
      }
      result.rows[j] = std::move(row);
    }
  };

  const int threads = std::max(1, std::min<int>(parallelism,
                                                static_cast<int>(jobs)));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  // Aggregate per cell.
  for (std::size_t c = 0; c < cells.size(); ++c) {
    CellAggregate agg;
    agg.config_id = cells[c].config_id;
    agg.group_id = cells[c].group_id;
    agg.horizon = cells[c].horizon;
    double sum = 0.0;
    int n = 0;
    for (std::size_t s = 0; s < seeds.size(); ++s) {
      const RunResult& row = result.rows[c * seeds.size() + s];
      if (row.failed) continue;
      sum += row.final_regret;
      ++n;
    }
    agg.seeds = n;
    if (n > 0) {
      agg.mean_regret = sum / n;
      double var = 0.0;
      for (std::size_t s = 0; s < seeds.size(); ++s) {
        const RunResult& row = result.rows[c * seeds.size() + s];
        if (row.failed) continue;
        var += (row.final_regret - agg.mean_regret) *
               (row.final_regret - agg.mean_regret);
      }
      agg.stderr_regret =
          n > 1 ? std::sqrt(var / (n - 1) / n) : 0.0;
    }
    result.cells.push_back(std::move(agg));
  }

  // Scaling fits over groups with at least two distinct horizons.
  std::vector<std::string> groups;
  for (const auto& cell : result.cells) {
    if (std::find(groups.begin(), groups.end(), cell.group_id) == groups.end()) {
      groups.push_back(cell.group_id);
    }
  }
  for (const auto& group : groups) {
    std::vector<std::pair<double, double>> points;
    for (const auto& cell : result.cells) {
      if (cell.group_id == group && cell.seeds > 0 && cell.mean_regret > 0.0) {
        points.emplace_back(static_cast<double>(cell.horizon), cell.mean_regret);
      }
    }
    std::vector<double> distinct;
    for (const auto& [t, r] : points) {
      if (std::find(distinct.begin(), distinct.end(), t) == distinct.end()) {
        distinct.push_back(t);
      }
    }
    if (distinct.size() >= 2) {
      ScalingFit fit;
      fit.group_id = group;
      fit.cells = static_cast<int>(points.size());
      fit.loglog_slope = loglog_slope(points);
      result.fits.push_back(std::move(fit));
    }
  }
  return result;
}

double loglog_slope(const std::vector<std::pair<double, double>>& t_regret) {
  if (t_regret.size() < 2) throw BadParameter("need at least 2 points");
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  const double n = static_cast<double>(t_regret.size());
  for (const auto& [t, r] : t_regret) {
    if (!(t > 0.0 && r > 0.0)) throw BadParameter("loglog fit needs positive values");
    const double x = std::log(t);
    const double y = std::log(r);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace graphbandit
