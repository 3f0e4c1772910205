#include "oracles.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

#include "graphbandit/errors.hpp"

namespace gbtest {

using graphbandit::DominationRule;
using graphbandit::FeedbackGraph;
using graphbandit::RegKind;
using graphbandit::RegularizerSpec;

namespace {

double term_value(const graphbandit::RegTerm& term, double x) {
  const double xlnx = x > 0.0 ? x * std::log(x) : 0.0;
  const double x1ln = x < 1.0 ? (1.0 - x) * std::log(1.0 - x) : 0.0;
  switch (term.kind) {
    case RegKind::kShannonFull:
      return term.weight * xlnx;
    case RegKind::kShannonPair:
      return term.weight * (xlnx + x1ln);
    case RegKind::kRootPair:
      return term.weight * (-2.0 * std::sqrt(x) - 2.0 * std::sqrt(1.0 - x));
  }
  return 0.0;
}

double term_grad(const graphbandit::RegTerm& term, double x) {
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

}  // namespace

double separable_objective(std::span<const double> losses,
                           const RegularizerSpec& spec,
                           std::span<const double> point) {
  double value = 0.0;
  for (std::size_t i = 0; i < losses.size(); ++i) {
    value += losses[i] * point[i] + term_value(spec[i], point[i]);
  }
  return value;
}

std::vector<double> project_simplex(std::vector<double> x) {
  std::vector<double> sorted = x;
  std::sort(sorted.begin(), sorted.end(), std::greater<double>());
  double running = 0.0;
  double theta = 0.0;
  int pivot = 0;
  for (std::size_t j = 0; j < sorted.size(); ++j) {
    running += sorted[j];
    const double candidate = (running - 1.0) / static_cast<double>(j + 1);
    if (sorted[j] - candidate > 0.0) {
      theta = candidate;
      pivot = static_cast<int>(j) + 1;
    }
  }
  (void)pivot;
  for (double& v : x) v = std::max(0.0, v - theta);
  return x;
}

std::vector<double> pgd_minimize(std::span<const double> losses,
                                 const RegularizerSpec& spec, int max_iters) {
  const std::size_t k = losses.size();
  std::vector<double> x(k, 1.0 / static_cast<double>(k));
  double obj = separable_objective(losses, spec, x);
  double step = 0.25;
  std::vector<double> grad(k), trial(k);
  for (int iter = 0; iter < max_iters; ++iter) {
    for (std::size_t i = 0; i < k; ++i) {
      grad[i] = losses[i] + term_grad(spec[i], x[i]);
    }
    step = std::min(step * 4.0, 4.0);
    bool accepted = false;
    while (step > 1e-18) {
      for (std::size_t i = 0; i < k; ++i) trial[i] = x[i] - step * grad[i];
      trial = project_simplex(trial);
      for (double& v : trial) v = std::max(v, 1e-15);
      const double trial_obj = separable_objective(losses, spec, trial);
      if (trial_obj < obj) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;
    double delta = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      delta = std::max(delta, std::abs(trial[i] - x[i]));
    }
    x = trial;
    obj = separable_objective(losses, spec, x);
    if (delta < 1e-13) break;
  }
  return x;
}

namespace {

std::vector<double> refine_simplex3(std::span<const double> losses,
                                    const RegularizerSpec& spec,
                                    double cx, double cy, double radius,
                                    double step) {
  double best = std::numeric_limits<double>::infinity();
  double bx = cx, by = cy;
  const double x0 = std::max(1e-12, cx - radius);
  const double y0 = std::max(1e-12, cy - radius);
  const int n = static_cast<int>(2.0 * radius / step) + 1;
  for (int i = 0; i <= n; ++i) {
    const double p0 = x0 + i * step;
    if (p0 > std::min(1.0, cx + radius)) break;
    for (int j = 0; j <= n; ++j) {
      const double p1 = y0 + j * step;
      if (p1 > std::min(1.0 - p0, cy + radius)) break;
      const double p2 = 1.0 - p0 - p1;
      if (p2 < 1e-12) continue;
      const double pt[3] = {p0, p1, p2};
      const double v = separable_objective(losses, spec, pt);
      if (v < best) {
        best = v;
        bx = p0;
        by = p1;
      }
    }
  }
  return {bx, by, 1.0 - bx - by};
}

}  // namespace

std::vector<double> grid_search_simplex3(std::span<const double> losses,
                                         const RegularizerSpec& spec) {
  std::vector<double> best = refine_simplex3(losses, spec, 0.5, 0.5, 0.5, 0.005);
  double radius = 0.01;
  double step = 0.0002;
  for (int stage = 0; stage < 5; ++stage) {
    best = refine_simplex3(losses, spec, best[0], best[1], radius, step);
    radius = step * 4.0;
    step /= 25.0;
  }
  return best;
}

std::vector<double> grid_search_simplex2(std::span<const double> losses,
                                         const RegularizerSpec& spec) {
  double lo = 1e-12, hi = 1.0 - 1e-12;
  double best_x = 0.5;
  for (int stage = 0; stage < 8 && hi - lo > 1e-12; ++stage) {
    const double step = (hi - lo) / 2000.0;
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= 2000; ++i) {
      const double x = lo + i * step;
      if (x > hi) break;
      const double pt[2] = {x, 1.0 - x};
      const double v = separable_objective(losses, spec, pt);
      if (v < best) {
        best = v;
        best_x = x;
      }
    }
    lo = std::max(1e-12, best_x - 2.0 * step);
    hi = std::min(1.0 - 1e-12, best_x + 2.0 * step);
  }
  return {best_x, 1.0 - best_x};
}

int independence_number_bruteforce(const FeedbackGraph& g) {
  const int k = g.num_arms();
  int best = 0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << k); ++mask) {
    bool independent = true;
    for (int u = 1; u <= k && independent; ++u) {
      if (!(mask & (std::uint64_t{1} << (u - 1)))) continue;
      for (int v = u + 1; v <= k && independent; ++v) {
        if (!(mask & (std::uint64_t{1} << (v - 1)))) continue;
        if (g.has_edge(u, v) || g.has_edge(v, u)) independent = false;
      }
    }
    if (independent) best = std::max(best, std::popcount(mask));
  }
  return best;
}

bool covers_targets(const FeedbackGraph& g, const std::vector<int>& d,
                    DominationRule rule) {
  const auto targets = graphbandit::domination_targets(g, rule);
  std::vector<char> covered(g.num_arms() + 1, 0);
  for (int v : d) {
    for (int w : g.out_neighbors(v)) covered[w] = 1;
  }
  return std::all_of(targets.begin(), targets.end(),
                     [&](int t) { return covered[t] != 0; });
}

int domination_number_bruteforce(const FeedbackGraph& g, DominationRule rule) {
  const int k = g.num_arms();
  const auto targets = graphbandit::domination_targets(g, rule);
  if (targets.empty()) return 0;
  int best = -1;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << k); ++mask) {
    std::vector<int> d;
    for (int v = 1; v <= k; ++v) {
      if (mask & (std::uint64_t{1} << (v - 1))) d.push_back(v);
    }
    if (!covers_targets(g, d, rule)) continue;
    const int size = std::popcount(mask);
    if (best < 0 || size < best) best = size;
  }
  return best;
}

FeedbackGraph random_digraph(int k, double p, std::uint64_t seed,
                             bool force_self_loops) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<std::pair<int, int>> edges;
  for (int i = 1; i <= k; ++i) {
    for (int j = 1; j <= k; ++j) {
      if (i == j && force_self_loops) {
        edges.emplace_back(i, j);
      } else if (unif(rng) < p) {
        edges.emplace_back(i, j);
      }
    }
  }
  return FeedbackGraph(k, edges);
}

FeedbackGraph permute_graph(const FeedbackGraph& g,
                            const std::vector<int>& perm) {
  std::vector<std::pair<int, int>> edges;
  for (const auto& [i, j] : g.edges()) {
    edges.emplace_back(perm[static_cast<std::size_t>(i - 1)],
                       perm[static_cast<std::size_t>(j - 1)]);
  }
  return FeedbackGraph(g.num_arms(), edges);
}

std::vector<double> random_simplex_point(int k, std::mt19937_64& rng,
                                         double uniform_floor) {
  std::exponential_distribution<double> expo(1.0);
  std::vector<double> p(static_cast<std::size_t>(k));
  double sum = 0.0;
  for (double& v : p) {
    v = expo(rng);
    sum += v;
  }
  for (double& v : p) {
    v = (1.0 - uniform_floor) * (v / sum) +
        uniform_floor / static_cast<double>(k);
  }
  return p;
}

std::vector<double> strong_beta_straight_line(std::span<const double> a,
                                              double c1, int num_arms) {
  std::vector<double> betas{c1};
  double entropy_sum = 0.0;
  const double log_k = std::log(static_cast<double>(num_arms));
  for (double a_t : a) {
    entropy_sum += a_t;
    betas.push_back(betas.back() + c1 / std::sqrt(1.0 + entropy_sum / log_k));
  }
  return betas;
}

WeakRecurrenceTrace weak_recurrence_straight_line(std::span<const double> a,
                                                  std::span<const double> b,
                                                  double c1, double c2,
                                                  int dominating_size) {
  WeakRecurrenceTrace trace;
  const double dsize = static_cast<double>(dominating_size);
  trace.beta.push_back(std::max(c2, 8.0 * dsize));
  double b_sum = 0.0;
  double z = 0.0;  // sum_{s <= t-1} b_s a_{s+1} / gamma'_s
  for (std::size_t t = 1; t <= b.size(); ++t) {
    b_sum += b[t - 1];
    const double gp = 0.25 * c1 * b[t - 1] / (c1 + std::cbrt(b_sum));
    if (t >= 2) {
      z += b[t - 2] * a[t - 1] / trace.gamma_prime[t - 2];
    }
    trace.gamma_prime.push_back(gp);
    trace.gamma.push_back(
        std::min(0.5, gp + 2.0 * dsize / trace.beta[t - 1]));
    trace.beta.push_back(trace.beta[t - 1] +
                         c2 * b[t - 1] / (gp * std::sqrt(c1 + z)));
  }
  return trace;
}

double entropy_bound_rhs(double mass_elsewhere, int k) {
  if (mass_elsewhere <= 0.0) return 0.0;
  return mass_elsewhere *
         (std::log(static_cast<double>(k - 1) / mass_elsewhere) + 1.0);
}

}  // namespace gbtest
