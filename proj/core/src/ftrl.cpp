#include "graphbandit/ftrl.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "graphbandit/errors.hpp"

namespace graphbandit {

namespace {

constexpr double kInterior = 1e-15;       // coordinate clamp
constexpr double kSumTol = 1e-13;         // outer bisection target on |sum-1|
constexpr double kSumTolAccept = 1e-10;   // hard failure threshold
constexpr int kOuterIterationCap = 200;

void check_finite(std::span<const double> losses) {
  for (double v : losses) {
    if (!std::isfinite(v)) throw NonFinite("loss vector has a non-finite entry");
  }
}

double clamp_interior(double x) {
  return std::min(1.0 - kInterior, std::max(kInterior, x));
}

// Inverse of f'(x) = v for one regularizer term, clamped to the interior.
double invert_grad(const RegTerm& term, double v) {
  switch (term.kind) {
    case RegKind::kShannonFull:
      // f'(x) = w (1 + ln x)
      return clamp_interior(std::exp(v / term.weight - 1.0));
    case RegKind::kShannonPair: {
      // f'(x) = w ln(x / (1-x)); inverse is the logistic function.
      const double z = v / term.weight;
      const double x = z >= 0.0 ? 1.0 / (1.0 + std::exp(-z))
                                : std::exp(z) / (1.0 + std::exp(z));
      return clamp_interior(x);
    }
    case RegKind::kRootPair: {
      // f'(x) = w (-x^{-1/2} + (1-x)^{-1/2}), strictly increasing on (0,1).
      // Closed-form inverse: with s = sqrt(x), t = sqrt(1-x) the target
      // equation reads (s - t)/(s t) = v/w. Writing p = s t and d = s - t,
      // d = p v/w and d^2 = 1 - 2p give p = 1/(1 + sqrt(1 + (v/w)^2)), and
      // s + t = sqrt(1 + 2p). The branch below avoids cancellation.
      const double target = v / term.weight;
      const double p = 1.0 / (1.0 + std::hypot(1.0, target));
      const double d = target * p;
      const double sum = std::sqrt(1.0 + 2.0 * p);
      double s;
      if (d >= 0.0) {
        s = 0.5 * (sum + d);
      } else {
        const double t = 0.5 * (sum - d);
        s = p / t;
      }
      return clamp_interior(s * s);
    }
  }
  return kInterior;
}

}  // namespace

bool SimplexPoint::is_valid(double sum_tol) const {
  if (p.empty()) return false;
  double sum = 0.0;
  for (double x : p) {
    if (!(x > 0.0 && x < 1.0)) return false;
    sum += x;
  }
  return std::abs(sum - 1.0) <= sum_tol;
}

RegularizerSpec uniform_spec(int k, RegKind kind, double weight) {
  return RegularizerSpec(static_cast<std::size_t>(k), RegTerm{kind, weight});
}

double reg_term_grad(const RegTerm& term, double x) {
  switch (term.kind) {
    case RegKind::kShannonFull:
      return term.weight * (1.0 + std::log(x));
    case RegKind::kShannonPair:
      return term.weight * std::log(x / (1.0 - x));
    case RegKind::kRootPair:
      return term.weight * (-1.0 / std::sqrt(x) + 1.0 / std::sqrt(1.0 - x));
  }
  return 0.0;
}

SimplexPoint solve_shannon(std::span<const double> losses, double beta) {
  check_finite(losses);
  if (!(beta > 0.0)) throw BadParameter("solve_shannon needs beta > 0");
  if (losses.size() < 2) throw BadParameter("need at least 2 arms");
  const double min_loss = *std::min_element(losses.begin(), losses.end());
  SimplexPoint q;
  q.p.resize(losses.size());
  double z = 0.0;
  for (std::size_t i = 0; i < losses.size(); ++i) {
    q.p[i] = std::exp(-(losses[i] - min_loss) / beta);
    z += q.p[i];
  }
  for (double& x : q.p) x = clamp_interior(x / z);
  return q;
}

SimplexPoint solve_separable(std::span<const double> losses,
                             const RegularizerSpec& spec) {
  check_finite(losses);
  const std::size_t k = losses.size();
  if (k < 2) throw BadParameter("need at least 2 arms");
  if (spec.size() != k) throw BadParameter("spec/loss size mismatch");
  for (const RegTerm& t : spec) {
    if (!(t.weight > 0.0)) throw BadParameter("regularizer weights must be positive");
  }

  auto coordinate = [&](std::size_t i, double lambda) {
    return invert_grad(spec[i], -(losses[i] + lambda));
  };
  auto total = [&](double lambda) {
    double s = 0.0;
    for (std::size_t i = 0; i < k; ++i) s += coordinate(i, lambda);
    return s;
  };

  // Bracket: lambda small enough that some coordinate saturates near 1
  // (sum >= 1), large enough that all coordinates shrink (sum <= 1).
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < k; ++i) {
    lo = std::min(lo, -reg_term_grad(spec[i], 1.0 - kInterior) - losses[i]);
    hi = std::max(hi, -reg_term_grad(spec[i], 1e-9) - losses[i]);
  }
  double span = std::max(1.0, hi - lo);
  for (int grow = 0; total(lo) < 1.0 && grow < 64; ++grow) { lo -= span; span *= 2.0; }
  span = std::max(1.0, hi - lo);
  for (int grow = 0; total(hi) > 1.0 && grow < 64; ++grow) { hi += span; span *= 2.0; }
  if (!(total(lo) >= 1.0 && total(hi) <= 1.0)) {
    throw NoConvergence("solve_separable failed to bracket the multiplier",
                        lo, hi, total(lo) - 1.0);
  }

  double best_lambda = lo;
  double best_err = std::abs(total(lo) - 1.0);
  for (int it = 0; it < kOuterIterationCap; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;  // bracket at float resolution
    const double s = total(mid);
    const double err = std::abs(s - 1.0);
    if (err < best_err) {
      best_err = err;
      best_lambda = mid;
    }
    if (err <= kSumTol) break;
    (s > 1.0 ? lo : hi) = mid;
  }

  SimplexPoint q;
  q.p.resize(k);
  for (std::size_t i = 0; i < k; ++i) q.p[i] = coordinate(i, best_lambda);
  double sum = 0.0;
  for (double x : q.p) sum += x;
  if (std::abs(sum - 1.0) > kSumTolAccept) {
    throw NoConvergence("solve_separable residual above tolerance", lo, hi,
                        sum - 1.0);
  }
  return q;
}

double kkt_residual(const SimplexPoint& q, std::span<const double> losses,
                    const RegularizerSpec& spec) {
  const std::size_t k = q.p.size();
  if (losses.size() != k || spec.size() != k) {
    throw BadParameter("kkt_residual size mismatch");
  }
  for (double x : q.p) {
    if (!(x > 0.0 && x < 1.0)) {
      throw BoundaryPoint("kkt_residual needs a strictly interior point");
    }
  }
  std::vector<double> station(k);
  double lambda_hat = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    station[i] = reg_term_grad(spec[i], q.p[i]) + losses[i];
    lambda_hat -= station[i];
  }
  lambda_hat /= static_cast<double>(k);
  double residual = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    residual = std::max(residual, std::abs(station[i] + lambda_hat));
  }
  return residual;
}

double shannon_entropy(std::span<const double> p) {
  double h = 0.0;
  for (double x : p) {
    if (x > 0.0) h -= x * std::log(x);
  }
  return h;
}

double pair_entropy_sum(std::span<const double> p,
                        std::span<const int> coords) {
  double a = 0.0;
  for (int c : coords) {
    const double x = p[static_cast<std::size_t>(c - 1)];
    if (x > 0.0) a -= x * std::log(x);
    if (x < 1.0) a -= (1.0 - x) * std::log(1.0 - x);
  }
  return a;
}

double pair_variance_sum(std::span<const double> p,
                         std::span<const int> coords) {
  double b = 0.0;
  for (int c : coords) {
    const double x = p[static_cast<std::size_t>(c - 1)];
    b += x * (1.0 - x);
  }
  return b;
}

SimplexPoint mix_uniform(const SimplexPoint& q, double gamma,
                         std::span<const int> support) {
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw BadParameter("gamma not in [0,1]");
  SimplexPoint p;
  p.p.resize(q.p.size());
  for (std::size_t i = 0; i < q.p.size(); ++i) p.p[i] = (1.0 - gamma) * q.p[i];
  if (support.empty()) {
    const double share = gamma / static_cast<double>(q.p.size());
    for (double& x : p.p) x += share;
  } else {
    const double share = gamma / static_cast<double>(support.size());
    for (int c : support) p.p[static_cast<std::size_t>(c - 1)] += share;
  }
  return p;
}

}  // namespace graphbandit
