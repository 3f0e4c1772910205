#pragma once

#include <span>
#include <string>
#include <vector>

namespace graphbandit {

// A point of the probability simplex. Solver outputs keep every coordinate
// strictly inside (0, 1) and sum to 1 within 1e-9.
struct SimplexPoint {
  std::vector<double> p;

  int size() const { return static_cast<int>(p.size()); }
  double operator[](int i) const { return p[static_cast<std::size_t>(i)]; }
  bool is_valid(double sum_tol = 1e-9) const;
};

// Per-coordinate regularizer terms.
//   kShannonFull  f(x) = w * x ln x            (full negative entropy)
//   kShannonPair  f(x) = w * (x ln x + (1-x) ln(1-x))
//   kRootPair     f(x) = w * (-2 sqrt(x) - 2 sqrt(1-x))
enum class RegKind { kShannonFull, kShannonPair, kRootPair };

struct RegTerm {
  RegKind kind = RegKind::kShannonFull;
  double weight = 1.0;
};

// One strictly convex term per coordinate, all weights positive.
using RegularizerSpec = std::vector<RegTerm>;

RegularizerSpec uniform_spec(int k, RegKind kind, double weight);

// f'(x) and its derivative for a single term; x must lie in (0, 1).
double reg_term_grad(const RegTerm& term, double x);

// argmin_{p in simplex} <L, p> - beta * H(p). Closed-form softmax of -L/beta
// with max-subtraction. Throws NonFinite on non-finite losses.
SimplexPoint solve_shannon(std::span<const double> losses, double beta);

// argmin_{p in simplex} sum_i [ L(i) p(i) + f_i(p(i)) ] via Lagrangian
// stationarity f_i'(x) + L(i) + lambda = 0 per coordinate and outer bisection
// on lambda. Shannon terms invert in closed form; root terms by inner
// bisection. Coordinates are clamped to [1e-15, 1 - 1e-15].
SimplexPoint solve_separable(std::span<const double> losses,
                             const RegularizerSpec& spec);

// max_i | f_i'(q(i)) + L(i) + lambda_hat | with lambda_hat the mean of
// -(f_i'(q(i)) + L(i)). Zero at the exact optimum. Throws BoundaryPoint if
// any coordinate is outside (0, 1).
double kkt_residual(const SimplexPoint& q, std::span<const double> losses,
                    const RegularizerSpec& spec);

// H(p) = sum_i p(i) ln(1/p(i)), with 0 ln 0 = 0.
double shannon_entropy(std::span<const double> p);

// -sum_{i in coords} h(p(i)) where h(x) = x ln x + (1-x) ln(1-x); this is
// the a_t quantity of the weak-graph policy. coords are 1-indexed.
double pair_entropy_sum(std::span<const double> p,
                        std::span<const int> coords);

// sum_{i in coords} p(i) (1 - p(i)); the b_t quantity. coords are 1-indexed.
double pair_variance_sum(std::span<const double> p,
                         std::span<const int> coords);

// Mixed distribution p = (1 - gamma) q + gamma * mu_support, with mu the
// uniform distribution over the (1-indexed) support. Empty support means
// the full arm set.
SimplexPoint mix_uniform(const SimplexPoint& q, double gamma,
                         std::span<const int> support = {});

}  // namespace graphbandit
