#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <string_view>

#include "graphbandit/ftrl.hpp"

namespace graphbandit {

// Per-round output of a policy. q is the FTRL minimizer, p the mixed
// sampling distribution. Diagnostic fields are NaN when a policy has no
// such quantity.
struct Decision {
  SimplexPoint q;
  SimplexPoint p;
  double gamma = 0.0;
  // Largest loss estimate the mixing floor permits on covered arms
  // (|U| / gamma for the policy's exploration support U).
  double estimate_bound = 0.0;
  double beta = std::numeric_limits<double>::quiet_NaN();
  double beta2 = std::numeric_limits<double>::quiet_NaN();
  double gamma_prime = std::numeric_limits<double>::quiet_NaN();
  double pair_entropy = std::numeric_limits<double>::quiet_NaN();   // a_t
  double pair_variance = std::numeric_limits<double>::quiet_NaN();  // b_t
};

// Sequential per-round interface. next() produces the round's decision,
// update() consumes the loss estimate for that same round; the two must
// alternate, starting with next().
class Policy {
 public:
  virtual ~Policy() = default;
  virtual Decision next() = 0;
  virtual void update(std::span<const double> loss_estimate) = 0;
  virtual int num_arms() const = 0;
  virtual std::string_view name() const = 0;
  virtual std::int64_t clip_events() const { return 0; }
};

}  // namespace graphbandit
