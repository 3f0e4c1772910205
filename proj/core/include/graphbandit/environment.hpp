#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace graphbandit {

// Gap ground truth for regret accounting; absent for adversarial schedules
// (no self-bounding certificate).
struct GroundTruth {
  int optimal_arm = 0;           // 1-indexed
  std::vector<double> gaps;      // Delta(i) = mean(i) - mean(i*)
  double delta_min = 0.0;
  double corruption_budget = 0.0;
};

enum class LossFamily { kBernoulli, kUniformAroundMean };

// I.i.d. losses with a unique optimal arm; construction rejects tied means.
struct StochasticSpec {
  std::vector<double> means;
  LossFamily family = LossFamily::kBernoulli;
  double uniform_halfwidth = 0.25;  // only for kUniformAroundMean
};

enum class CorruptionStrategy { kFlipOptimalPrefix, kPeriodicSwap };

// Stochastic base stream plus an adversary spending at most `budget` of
// total max-norm change.
struct CorruptedSpec {
  StochasticSpec base;
  double budget = 0.0;
  CorruptionStrategy strategy = CorruptionStrategy::kFlipOptimalPrefix;
  int period = 10;  // only for kPeriodicSwap
};

// Oblivious deterministic schedules.
struct AlternatingBlocksSchedule {
  int period = 100;
};
struct LinearDriftSchedule {
  double rate = 1e-4;
};
struct ScriptedSchedule {
  std::string path;
};

struct AdversarialSpec {
  std::variant<AlternatingBlocksSchedule, LinearDriftSchedule, ScriptedSchedule>
      schedule = AlternatingBlocksSchedule{};
};

using EnvironmentSpec = std::variant<StochasticSpec, CorruptedSpec, AdversarialSpec>;

// One environment instance per episode. losses(t) is a pure function of
// (spec, seed, t); base randomness is drawn from counter-based per-round
// streams, so draws do not depend on call order. The corruption ledger is
// cached incrementally but yields the same schedule for any access pattern.
class Environment {
 public:
  Environment(EnvironmentSpec spec, int num_arms, std::uint64_t seed);

  int num_arms() const { return k_; }
  std::uint64_t seed() const { return seed_; }
  const EnvironmentSpec& spec() const { return spec_; }

  // Full loss vector for round t >= 1, values in [0, 1].
  std::vector<double> losses(std::int64_t t) const;

  // Gaps and budget; nullopt for adversarial schedules.
  std::optional<GroundTruth> ground_truth() const;

  // Total realized corruption through round t (0 for non-corrupted specs).
  double realized_corruption(std::int64_t t) const;

 private:
  struct CorruptionCache;

  std::vector<double> base_losses(const StochasticSpec& s, std::int64_t t) const;
  std::vector<double> adversarial_losses(const AdversarialSpec& s,
                                         std::int64_t t) const;
  void extend_corruption_cache(std::int64_t t) const;

  EnvironmentSpec spec_;
  int k_;
  std::uint64_t seed_;
  std::shared_ptr<CorruptionCache> corruption_;  // lazily grown ledger
  std::vector<std::vector<double>> script_;      // loaded scripted losses
};

// Validates means (all in [0,1], unique minimizer) and returns the ground
// truth they induce. Throws BadParameter on ties or out-of-range values.
GroundTruth stochastic_ground_truth(const std::vector<double>& means,
                                    double budget = 0.0);

// Parses "t,l1,...,lK" CSV rows into per-round loss vectors.
std::vector<std::vector<double>> load_scripted_losses(const std::string& path,
                                                      int num_arms);

}  // namespace graphbandit
