#include <cmath>
#include <random>

#include <doctest.h>

#include "graphbandit/errors.hpp"
#include "graphbandit/feedback.hpp"
#include "oracles.hpp"

using namespace graphbandit;

TEST_CASE("observation probabilities") {
  SUBCASE("loopless 3-clique sums the other two masses") {
    const auto g = make_loopless_clique(3);
    const SimplexPoint p{std::vector<double>{0.5, 0.3, 0.2}};
    const auto obs = observation_probabilities(g, p);
    CHECK(obs[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(obs[1] == doctest::Approx(0.7).epsilon(1e-12));
    CHECK(obs[2] == doctest::Approx(0.8).epsilon(1e-12));
  }
  SUBCASE("bandit graph reproduces p") {
    const auto g = make_bandit(4);
    const SimplexPoint p{std::vector<double>{0.1, 0.2, 0.3, 0.4}};
    CHECK(observation_probabilities(g, p) == p.p);
  }
  SUBCASE("full feedback observes everything") {
    const auto g = make_full_feedback(3);
    const SimplexPoint p{std::vector<double>{0.2, 0.5, 0.3}};
    for (double v : observation_probabilities(g, p)) {
      CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("estimate_losses") {
  SUBCASE("full feedback reproduces the loss vector") {
    const auto g = make_full_feedback(3);
    const SimplexPoint p{std::vector<double>{0.2, 0.5, 0.3}};
    const std::vector<double> losses{0.1, 0.7, 0.4};
    const auto est = estimate_losses(g, p, reveal(g, 2, losses));
    for (int i = 0; i < 3; ++i) {
      CHECK(est.values[static_cast<std::size_t>(i)] ==
            doctest::Approx(losses[static_cast<std::size_t>(i)]).epsilon(1e-12));
    }
  }
  SUBCASE("bandit graph importance weight") {
    const auto g = make_bandit(3);
    const SimplexPoint p{std::vector<double>{0.3, 0.4, 0.3}};
    const auto est = estimate_losses(g, p, reveal(g, 2, std::vector<double>{0.2, 0.8, 0.5}));
    CHECK(est.values[0] == 0.0);
    CHECK(est.values[1] == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(est.values[2] == 0.0);
  }
  SUBCASE("unobserved loss never leaks into the estimate") {
    const auto g = make_revealing_action(4);  // arms 2..4 reveal nothing
    const SimplexPoint p{std::vector<double>{0.4, 0.2, 0.2, 0.2}};
    const auto est = estimate_losses(g, p, reveal(g, 3, std::vector<double>{0.9, 0.9, 0.9, 0.9}));
    for (double v : est.values) CHECK(v == 0.0);
  }
  SUBCASE("zero observation probability is a wiring bug") {
    const auto g = FeedbackGraph(3, {{1, 1}, {1, 3}, {2, 2}, {3, 3}, {3, 1}});
    // All mass on arm 2, which is outside N_in(1) and N_in(3).
    SimplexPoint p{std::vector<double>{0.0, 1.0, 0.0}};
    CHECK_THROWS_AS(
        estimate_losses(g, p, reveal(g, 1, std::vector<double>{0.5, 0.5, 0.5})),
        ZeroObservationProbability);
  }
}

TEST_CASE("estimator is exactly unbiased under enumeration of the action") {
  std::mt19937_64 rng(909);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int trial = 0; trial < 60; ++trial) {
    const int k = 2 + static_cast<int>(rng() % 9);
    const auto g = gbtest::random_digraph(k, 0.2 + 0.6 * unif(rng), rng(), false);
    const SimplexPoint p{gbtest::random_simplex_point(k, rng)};
    std::vector<double> losses(static_cast<std::size_t>(k));
    for (double& v : losses) v = unif(rng);
    const auto obs_prob = observation_probabilities(g, p);

    std::vector<double> expectation(static_cast<std::size_t>(k), 0.0);
    for (int j = 1; j <= k; ++j) {
      const auto est = estimate_losses(g, p, reveal(g, j, losses));
      for (int i = 0; i < k; ++i) {
        expectation[static_cast<std::size_t>(i)] += p[j - 1] * est.values[static_cast<std::size_t>(i)];
      }
    }
    for (int i = 0; i < k; ++i) {
      if (obs_prob[static_cast<std::size_t>(i)] > 0.0) {
        CHECK(std::abs(expectation[static_cast<std::size_t>(i)] -
                       losses[static_cast<std::size_t>(i)]) < 1e-12);
      } else {
        CHECK(expectation[static_cast<std::size_t>(i)] == 0.0);
      }
    }
  }
}
