#pragma once

#include <stdexcept>
#include <string>

namespace graphbandit {

// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Invalid argument to a constructor or operation.
struct BadParameter : Error {
  using Error::Error;
};

// A graph operation was asked for an exact computation beyond its size cap.
struct TooLarge : Error {
  using Error::Error;
};

// A dominating-set target vertex has an empty in-neighborhood.
struct UncoverableTarget : Error {
  using Error::Error;
};

// A vertex in V2 lacks a self-loop although the dominating set was built
// under the no-self-loop target rule.
struct InvalidDominatingSet : Error {
  using Error::Error;
};

// Loss vector handed to a solver contains NaN or infinity.
struct NonFinite : Error {
  using Error::Error;
};

// The simplex solver exhausted its iteration budget.
struct NoConvergence : Error {
  NoConvergence(const std::string& what, double bracket_lo, double bracket_hi,
                double residual)
      : Error(what), bracket_lo(bracket_lo), bracket_hi(bracket_hi),
        residual(residual) {}
  double bracket_lo;
  double bracket_hi;
  double residual;
};

// KKT residual requested at a point touching the simplex boundary.
struct BoundaryPoint : Error {
  using Error::Error;
};

// An observed vertex has zero observation probability; indicates a
// policy/graph wiring bug rather than an environment condition.
struct ZeroObservationProbability : Error {
  using Error::Error;
};

struct NotStronglyObservable : Error {
  using Error::Error;
};

struct NotWeaklyObservable : Error {
  using Error::Error;
};

// The weak policy saw a round with exactly zero pair variance on V1.
struct DegenerateGammaPrime : Error {
  using Error::Error;
};

// Policy next()/update() called out of their documented order.
struct SequencingViolation : Error {
  using Error::Error;
};

// The two-block weak policy requires a nonempty V2.
struct EmptyV2 : Error {
  using Error::Error;
};

// Internal bug signal: a corruption strategy attempted to exceed its budget.
struct BudgetExceeded : Error {
  using Error::Error;
};

// A scripted loss file ran out of rows before round T.
struct ScriptExhausted : Error {
  using Error::Error;
};

// Pseudo-regret requested on an environment without gap ground truth.
struct NoGroundTruth : Error {
  using Error::Error;
};

// Trace lacks a field required by the requested statistic.
struct MissingTraceField : Error {
  using Error::Error;
};

// Policy incompatible with the graph's observability class.
struct PolicyGraphMismatch : Error {
  using Error::Error;
};

}  // namespace graphbandit
