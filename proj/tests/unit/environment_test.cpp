#include <cmath>
#include <fstream>

#include <doctest.h>

#include "graphbandit/environment.hpp"
#include "graphbandit/errors.hpp"

using namespace graphbandit;

TEST_CASE("stochastic environment") {
  SUBCASE("bernoulli draws hit their means within 3 sigma") {
    StochasticSpec spec;
    spec.means = {0.1, 0.5};
    Environment env(spec, 2, 7);
    const int n = 100000;
    double sum0 = 0.0, sum1 = 0.0;
    for (int t = 1; t <= n; ++t) {
      const auto l = env.losses(t);
      CHECK((l[0] == 0.0 || l[0] == 1.0));
      sum0 += l[0];
      sum1 += l[1];
    }
    const double sigma0 = std::sqrt(0.1 * 0.9 / n);
    const double sigma1 = std::sqrt(0.25 / n);
    CHECK(std::abs(sum0 / n - 0.1) < 3.0 * sigma0);
    CHECK(std::abs(sum1 / n - 0.5) < 3.0 * sigma1);
  }
  SUBCASE("uniform family stays in range") {
    StochasticSpec spec;
    spec.means = {0.05, 0.95, 0.5};
    spec.family = LossFamily::kUniformAroundMean;
    Environment env(spec, 3, 3);
    for (int t = 1; t <= 2000; ++t) {
      for (double v : env.losses(t)) {
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
      }
    }
  }
  SUBCASE("tied means are rejected at construction") {
    StochasticSpec spec;
    spec.means = {0.2, 0.2, 0.9};
    CHECK_THROWS_AS(Environment(spec, 3, 1), BadParameter);
  }
  SUBCASE("draws are independent of call order") {
    StochasticSpec spec;
    spec.means = {0.3, 0.6};
    Environment env(spec, 2, 11);
    const auto l5 = env.losses(5);
    const auto l2 = env.losses(2);
    Environment env2(spec, 2, 11);
    CHECK(env2.losses(2) == l2);
    CHECK(env2.losses(5) == l5);
  }
}

TEST_CASE("ground truth") {
  SUBCASE("gaps from the means") {
    StochasticSpec spec;
    spec.means = {0.2, 0.5, 0.9};
    Environment env(spec, 3, 1);
    const auto gt = env.ground_truth();
    REQUIRE(gt.has_value());
    CHECK(gt->optimal_arm == 1);
    CHECK(gt->gaps == std::vector<double>{0.0, 0.3, 0.7});
    CHECK(gt->delta_min == doctest::Approx(0.3));
    CHECK(gt->corruption_budget == 0.0);
  }
  SUBCASE("corrupted environments expose the budget") {
    CorruptedSpec spec;
    spec.base.means = {0.2, 0.5, 0.9};
    spec.budget = 50.0;
    Environment env(spec, 3, 1);
    const auto gt = env.ground_truth();
    REQUIRE(gt.has_value());
    CHECK(gt->corruption_budget == 50.0);
    CHECK(gt->gaps == std::vector<double>{0.0, 0.3, 0.7});
  }
  SUBCASE("adversarial schedules have no certificate") {
    AdversarialSpec spec;
    Environment env(spec, 2, 1);
    CHECK_FALSE(env.ground_truth().has_value());
  }
}

TEST_CASE("corrupted environment") {
  SUBCASE("zero budget reproduces the base stream exactly") {
    CorruptedSpec spec;
    spec.base.means = {0.1, 0.4};
    spec.budget = 0.0;
    Environment corrupted(spec, 2, 99);
    Environment base(spec.base, 2, 99);
    for (int t = 1; t <= 500; ++t) {
      CHECK(corrupted.losses(t) == base.losses(t));
    }
    CHECK(corrupted.realized_corruption(500) == 0.0);
  }
  SUBCASE("flip strategy corrupts a prefix within budget") {
    CorruptedSpec spec;
    spec.base.means = {0.1, 0.4, 0.8};
    spec.budget = 10.0;
    Environment env(spec, 3, 5);
    Environment base(spec.base, 3, 5);
    double total_change = 0.0;
    int last_growth = 0;
    double prev_ledger = 0.0;
    for (int t = 1; t <= 300; ++t) {
      const auto l = env.losses(t);
      const auto b = base.losses(t);
      double change = 0.0;
      for (int i = 0; i < 3; ++i) change = std::max(change, std::abs(l[i] - b[i]));
      if (change > 0.0) {
        CHECK(l[0] == 1.0);  // optimal arm poisoned high
        CHECK(l[1] == 0.0);  // best suboptimal promoted
      }
      total_change += change;
      const double ledger = env.realized_corruption(t);
      if (ledger > prev_ledger) last_growth = t;
      prev_ledger = ledger;
    }
    // Corruption is a prefix: nothing changes after the ledger stops growing.
    for (int t = last_growth + 1; t <= 300; ++t) {
      CHECK(env.losses(t) == base.losses(t));
    }
    CHECK(env.realized_corruption(300) <= 10.0);
    CHECK(env.realized_corruption(300) == doctest::Approx(total_change).epsilon(1e-12));
    CHECK(env.realized_corruption(300) > 8.0);  // budget nearly used
  }
  SUBCASE("periodic swap respects period and budget") {
    CorruptedSpec spec;
    spec.base.means = {0.1, 0.4};
    spec.budget = 3.0;
    spec.strategy = CorruptionStrategy::kPeriodicSwap;
    spec.period = 7;
    Environment env(spec, 2, 12);
    Environment base(spec.base, 2, 12);
    for (int t = 1; t <= 200; ++t) {
      const auto l = env.losses(t);
      const auto b = base.losses(t);
      if ((t - 1) % 7 != 0) CHECK(l == b);
    }
    CHECK(env.realized_corruption(200) <= 3.0);
  }
  SUBCASE("ledger is monotone and capped") {
    CorruptedSpec spec;
    spec.base.means = {0.2, 0.6};
    spec.budget = 5.0;
    Environment env(spec, 2, 8);
    double prev = 0.0;
    for (int t = 1; t <= 100; ++t) {
      const double r = env.realized_corruption(t);
      CHECK(r >= prev);
      CHECK(r <= 5.0);
      prev = r;
    }
  }
}

TEST_CASE("adversarial schedules") {
  SUBCASE("alternating blocks flip every period") {
    AdversarialSpec spec;
    spec.schedule = AlternatingBlocksSchedule{100};
    Environment env(spec, 2, 1);
    CHECK(env.losses(1) == std::vector<double>{0.0, 1.0});
    CHECK(env.losses(100) == std::vector<double>{0.0, 1.0});
    CHECK(env.losses(101) == std::vector<double>{1.0, 0.0});
    CHECK(env.losses(201) == std::vector<double>{0.0, 1.0});
    Environment replay(spec, 2, 999);  // schedule ignores the seed
    CHECK(replay.losses(57) == env.losses(57));
  }
  SUBCASE("linear drift stays in range and reverses the order") {
    AdversarialSpec spec;
    spec.schedule = LinearDriftSchedule{1e-3};
    Environment env(spec, 4, 1);
    const auto early = env.losses(1);
    const auto late = env.losses(2000);
    CHECK(early[0] < early[3]);
    CHECK(late[0] > late[3]);
    for (int t = 1; t <= 2000; t += 97) {
      for (double v : env.losses(t)) {
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
      }
    }
  }
  SUBCASE("scripted file replays and exhausts") {
    const std::string path = "scripted_losses_test.csv";
    {
      std::ofstream out(path);
      out << "t,l1,l2\n1,0.25,0.75\n2,1.0,0.0\n";
    }
    AdversarialSpec spec;
    spec.schedule = ScriptedSchedule{path};
    Environment env(spec, 2, 1);
    CHECK(env.losses(1) == std::vector<double>{0.25, 0.75});
    CHECK(env.losses(2) == std::vector<double>{1.0, 0.0});
    CHECK_THROWS_AS(env.losses(3), ScriptExhausted);
    CHECK_THROWS_AS(Environment(AdversarialSpec{ScriptedSchedule{"missing.csv"}}, 2, 1),
                    BadParameter);
  }
}
