#include "graphbandit/environment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "graphbandit/errors.hpp"
#include "graphbandit/numeric.hpp"

namespace graphbandit {

namespace {

constexpr std::uint64_t kLossStream = 101;

double clamp01(double x) { return std::min(1.0, std::max(0.0, x)); }

// Second-lowest-mean arm; the corruption strategies promote it.
int best_suboptimal_arm(const std::vector<double>& means, int optimal) {
  int arm = -1;
  for (int i = 0; i < static_cast<int>(means.size()); ++i) {
    if (i + 1 == optimal) continue;
    if (arm < 0 || means[i] < means[arm - 1]) arm = i + 1;
  }
  return arm;
}

}  // namespace

GroundTruth stochastic_ground_truth(const std::vector<double>& means,
                                    double budget) {
  if (means.size() < 2) throw BadParameter("need at least 2 arms");
  for (double m : means) {
    if (!(m >= 0.0 && m <= 1.0)) throw BadParameter("means must lie in [0,1]");
  }
  const auto it = std::min_element(means.begin(), means.end());
  const double best = *it;
  const int optimal = static_cast<int>(it - means.begin()) + 1;
  GroundTruth gt;
  gt.optimal_arm = optimal;
  gt.gaps.resize(means.size());
  gt.delta_min = 2.0;
  for (std::size_t i = 0; i < means.size(); ++i) {
    gt.gaps[i] = means[i] - best;
    if (static_cast<int>(i) + 1 != optimal) {
      if (gt.gaps[i] == 0.0) {
        throw BadParameter("means must have a unique minimizer");
      }
      gt.delta_min = std::min(gt.delta_min, gt.gaps[i]);
    }
  }
  gt.corruption_budget = budget;
  return gt;
}

std::vector<std::vector<double>> load_scripted_losses(const std::string& path,
                                                      int num_arms) {
  std::ifstream in(path);
  if (!in) throw BadParameter("cannot open scripted loss file: " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (header) {  // "t,l1,...,lK"
      header = false;
      continue;
    }
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    bool first = true;
    while (std::getline(ss, cell, ',')) {
      if (first) {  // round index column
        first = false;
        continue;
      }
      row.push_back(std::stod(cell));
    }
    if (static_cast<int>(row.size()) != num_arms) {
      throw BadParameter("scripted loss row has wrong arity");
    }
    for (double v : row) {
      if (!(v >= 0.0 && v <= 1.0)) {
        throw BadParameter("scripted loss outside [0,1]");
      }
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw BadParameter("scripted loss file has no data rows");
  return rows;
}

// Incrementally discovered corruption schedule. rounds[t-1] says whether
// round t is corrupted; realized[t-1] is the ledger through round t.
struct Environment::CorruptionCache {
  std::vector<char> rounds;
  std::vector<double> realized;
  bool prefix_stopped = false;
};

Environment::Environment(EnvironmentSpec spec, int num_arms,
                         std::uint64_t seed)
    : spec_(std::move(spec)), k_(num_arms), seed_(seed) {
  if (k_ < 2) throw BadParameter("need at least 2 arms");
  if (const auto* s = std::get_if<StochasticSpec>(&spec_)) {
    if (static_cast<int>(s->means.size()) != k_) {
      throw BadParameter("means/arms size mismatch");
    }
    stochastic_ground_truth(s->means);  // validates
  } else if (const auto* c = std::get_if<CorruptedSpec>(&spec_)) {
    if (static_cast<int>(c->base.means.size()) != k_) {
      throw BadParameter("means/arms size mismatch");
    }
    if (!(c->budget >= 0.0)) throw BadParameter("corruption budget must be >= 0");
    if (c->strategy == CorruptionStrategy::kPeriodicSwap && c->period < 1) {
      throw BadParameter("periodic swap needs period >= 1");
    }
    stochastic_ground_truth(c->base.means);
    corruption_ = std::make_shared<CorruptionCache>();
  } else if (const auto* a = std::get_if<AdversarialSpec>(&spec_)) {
    if (const auto* scripted = std::get_if<ScriptedSchedule>(&a->schedule)) {
      script_ = load_scripted_losses(scripted->path, k_);
    }
  }
}

std::vector<double> Environment::base_losses(const StochasticSpec& s,
                                             std::int64_t t) const {
  std::vector<double> out(static_cast<std::size_t>(k_));
  for (int i = 0; i < k_; ++i) {
    const double u = counter_uniform(seed_, kLossStream,
                                     static_cast<std::uint64_t>(t),
                                     static_cast<std::uint64_t>(i));
    if (s.family == LossFamily::kBernoulli) {
      out[static_cast<std::size_t>(i)] = u < s.means[static_cast<std::size_t>(i)] ? 1.0 : 0.0;
    } else {
      out[static_cast<std::size_t>(i)] = clamp01(
          s.means[static_cast<std::size_t>(i)] + (2.0 * u - 1.0) * s.uniform_halfwidth);
    }
  }
  return out;
}

std::vector<double> Environment::adversarial_losses(const AdversarialSpec& s,
                                                    std::int64_t t) const {
  std::vector<double> out(static_cast<std::size_t>(k_));
  if (const auto* blocks = std::get_if<AlternatingBlocksSchedule>(&s.schedule)) {
    const std::int64_t block = (t - 1) / blocks->period;
    for (int i = 0; i < k_; ++i) {
      out[static_cast<std::size_t>(i)] = ((block + i + 1) % 2 == 0) ? 1.0 : 0.0;
    }
  } else if (const auto* drift = std::get_if<LinearDriftSchedule>(&s.schedule)) {
    // Arm order reverses as the drift parameter moves 0 -> 1.
    const double mix = std::min(1.0, static_cast<double>(t) * drift->rate);
    for (int i = 0; i < k_; ++i) {
      const double base = static_cast<double>(i) / static_cast<double>(k_ - 1);
      out[static_cast<std::size_t>(i)] = clamp01((1.0 - mix) * base + mix * (1.0 - base));
    }
  } else {
    if (t > static_cast<std::int64_t>(script_.size())) {
      throw ScriptExhausted("scripted losses end at round " +
                            std::to_string(script_.size()));
    }
    out = script_[static_cast<std::size_t>(t - 1)];
  }
  return out;
}

void Environment::extend_corruption_cache(std::int64_t t) const {
  const auto& c = std::get<CorruptedSpec>(spec_);
  auto& cache = *corruption_;
  const GroundTruth gt = stochastic_ground_truth(c.base.means, c.budget);
  const int target = best_suboptimal_arm(c.base.means, gt.optimal_arm);
  while (static_cast<std::int64_t>(cache.rounds.size()) < t) {
    const std::int64_t round = static_cast<std::int64_t>(cache.rounds.size()) + 1;
    const double spent = cache.realized.empty() ? 0.0 : cache.realized.back();
    bool corrupt = false;
    double cost = 0.0;
    const bool scheduled =
        c.strategy == CorruptionStrategy::kFlipOptimalPrefix
            ? !cache.prefix_stopped
            : (round - 1) % c.period == 0;
    if (scheduled && spent < c.budget) {
      const auto base = base_losses(c.base, round);
      const double opt = base[static_cast<std::size_t>(gt.optimal_arm - 1)];
      const double sub = base[static_cast<std::size_t>(target - 1)];
      if (c.strategy == CorruptionStrategy::kFlipOptimalPrefix) {
        // l(i*) -> 1, l(best suboptimal) -> 0.
        cost = std::max(1.0 - opt, sub);
      } else {
        cost = std::abs(opt - sub);  // swap the two values
      }
      if (spent + cost <= c.budget) {
        corrupt = true;
      } else {
        cost = 0.0;
        // The prefix ends at the first unaffordable round.
        if (c.strategy == CorruptionStrategy::kFlipOptimalPrefix) {
          cache.prefix_stopped = true;
        }
      }
    } else if (scheduled && c.strategy == CorruptionStrategy::kFlipOptimalPrefix) {
      cache.prefix_stopped = true;
    }
    if (spent + cost > c.budget) {
      throw BudgetExceeded("corruption strategy exceeded its budget");
    }
    cache.rounds.push_back(corrupt ? 1 : 0);
    cache.realized.push_back(spent + cost);
  }
}

std::vector<double> Environment::losses(std::int64_t t) const {
  if (t < 1) throw BadParameter("rounds are 1-indexed");
  if (const auto* s = std::get_if<StochasticSpec>(&spec_)) {
    return base_losses(*s, t);
  }
  if (const auto* a = std::get_if<AdversarialSpec>(&spec_)) {
    return adversarial_losses(*a, t);
  }
  const auto& c = std::get<CorruptedSpec>(spec_);
  extend_corruption_cache(t);
  auto out = base_losses(c.base, t);
  if (corruption_->rounds[static_cast<std::size_t>(t - 1)]) {
    const GroundTruth gt = stochastic_ground_truth(c.base.means, c.budget);
    const int target = best_suboptimal_arm(c.base.means, gt.optimal_arm);
    double& opt = out[static_cast<std::size_t>(gt.optimal_arm - 1)];
    double& sub = out[static_cast<std::size_t>(target - 1)];
    if (c.strategy == CorruptionStrategy::kFlipOptimalPrefix) {
      opt = 1.0;
      sub = 0.0;
    } else {
      std::swap(opt, sub);
    }
  }
  return out;
}

std::optional<GroundTruth> Environment::ground_truth() const {
  if (const auto* s = std::get_if<StochasticSpec>(&spec_)) {
    return stochastic_ground_truth(s->means, 0.0);
  }
  if (const auto* c = std::get_if<CorruptedSpec>(&spec_)) {
    return stochastic_ground_truth(c->base.means, c->budget);
  }
  return std::nullopt;
}

double Environment::realized_corruption(std::int64_t t) const {
  if (!std::holds_alternative<CorruptedSpec>(spec_)) return 0.0;
  if (t < 1) return 0.0;
  extend_corruption_cache(t);
  return corruption_->realized[static_cast<std::size_t>(t - 1)];
}

}  // namespace graphbandit
