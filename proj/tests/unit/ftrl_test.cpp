#include <cmath>
#include <random>

#include <doctest.h>

#include "graphbandit/errors.hpp"
#include "graphbandit/ftrl.hpp"
#include "oracles.hpp"

using namespace graphbandit;

namespace {

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    d = std::max(d, std::abs(a[i] - b[i]));
  }
  return d;
}

RegularizerSpec random_mixed_spec(int k, std::mt19937_64& rng,
                                  double w_lo = 5.0, double w_hi = 15.0) {
  std::uniform_real_distribution<double> weight(w_lo, w_hi);
  RegularizerSpec spec;
  for (int i = 0; i < k; ++i) {
    const RegKind kind = (rng() % 2 == 0) ? RegKind::kShannonPair
                                          : RegKind::kRootPair;
    spec.push_back({kind, weight(rng)});
  }
  // At least one of each so the mix is genuinely hybrid.
  spec[0].kind = RegKind::kShannonPair;
  spec[static_cast<std::size_t>(k - 1)].kind = RegKind::kRootPair;
  return spec;
}

}  // namespace

TEST_CASE("solve_shannon") {
  SUBCASE("zero losses give the uniform point") {
    const auto q = solve_shannon(std::vector<double>{0.0, 0.0, 0.0}, 5.0);
    for (int i = 0; i < 3; ++i) CHECK(q[i] == doctest::Approx(1.0 / 3).epsilon(1e-12));
  }
  SUBCASE("a beta*ln2 gap yields the 2:1 split") {
    const double beta = 3.7;
    const auto q = solve_shannon(std::vector<double>{0.0, beta * std::log(2.0)}, beta);
    CHECK(q[0] == doctest::Approx(2.0 / 3).epsilon(1e-12));
    CHECK(q[1] == doctest::Approx(1.0 / 3).epsilon(1e-12));
  }
  SUBCASE("matches the separable solver and a grid search") {
    const std::vector<double> losses{3.1, 0.4, 7.9};
    const double beta = 1.7;
    const auto q = solve_shannon(losses, beta);
    const auto spec = uniform_spec(3, RegKind::kShannonFull, beta);
    const auto q2 = solve_separable(losses, spec);
    CHECK(max_abs_diff(q.p, q2.p) < 1e-7);
    const auto grid = gbtest::grid_search_simplex3(losses, spec);
    CHECK(max_abs_diff(q.p, grid) < 1e-6);
    CHECK(kkt_residual(q, losses, spec) < 1e-8);
  }
  SUBCASE("rejects non-finite losses") {
    CHECK_THROWS_AS(
        solve_shannon(std::vector<double>{0.0, std::nan("")}, 1.0), NonFinite);
    CHECK_THROWS_AS(solve_shannon(
                        std::vector<double>{
                            0.0, std::numeric_limits<double>::infinity()},
                        1.0),
                    NonFinite);
  }
}

TEST_CASE("solve_separable") {
  SUBCASE("symmetric pair problem lands on the uniform point") {
    const auto q = solve_separable(std::vector<double>{0.0, 0.0, 0.0, 0.0},
                                   uniform_spec(4, RegKind::kShannonPair, 2.0));
    for (int i = 0; i < 4; ++i) CHECK(q[i] == doctest::Approx(0.25).epsilon(1e-10));
  }
  SUBCASE("root + pair hybrid at K = 2 matches a 1-D grid oracle") {
    const std::vector<double> losses{0.0, 0.0};
    const RegularizerSpec spec{{RegKind::kRootPair, 1.0},
                               {RegKind::kShannonPair, 1.0}};
    const auto q = solve_separable(losses, spec);
    CHECK(kkt_residual(q, losses, spec) < 1e-8);
    const auto grid = gbtest::grid_search_simplex2(losses, spec);
    CHECK(max_abs_diff(q.p, grid) < 1e-5);
  }
  SUBCASE("K = 4 mixed specs match the projected-gradient oracle") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> loss(0.0, 10.0);
    for (int trial = 0; trial < 100; ++trial) {
      const auto spec = random_mixed_spec(4, rng, 1.0, 10.0);
      std::vector<double> losses(4);
      for (double& v : losses) v = loss(rng);
      const auto q = solve_separable(losses, spec);
      CHECK(q.is_valid(1e-9));
      CHECK(kkt_residual(q, losses, spec) < 1e-8);
      const auto oracle = gbtest::pgd_minimize(losses, spec);
      CHECK(max_abs_diff(q.p, oracle) < 1e-5);
    }
  }
  SUBCASE("rejects bad specs") {
    CHECK_THROWS_AS(
        solve_separable(std::vector<double>{0.0, 0.0},
                        RegularizerSpec{{RegKind::kShannonPair, 0.0},
                                        {RegKind::kShannonPair, 1.0}}),
        BadParameter);
    CHECK_THROWS_AS(solve_separable(std::vector<double>{0.0, 0.0},
                                    uniform_spec(3, RegKind::kShannonPair, 1.0)),
                    BadParameter);
  }
}

TEST_CASE("kkt_residual") {
  SUBCASE("solver outputs are stationary") {
    const std::vector<double> losses{1.0, 0.2, 4.4, 2.0};
    const auto spec = uniform_spec(4, RegKind::kShannonFull, 2.5);
    const auto q = solve_shannon(losses, 2.5);
    CHECK(kkt_residual(q, losses, spec) < 1e-8);
  }
  SUBCASE("the uniform point is not optimal for non-constant losses") {
    SimplexPoint uniform{std::vector<double>(3, 1.0 / 3)};
    const std::vector<double> losses{0.0, 1.0, 2.0};
    CHECK(kkt_residual(uniform, losses,
                       uniform_spec(3, RegKind::kShannonFull, 1.0)) > 0.1);
  }
  SUBCASE("boundary points are rejected") {
    SimplexPoint corner{std::vector<double>{1.0, 0.0}};
    CHECK_THROWS_AS(kkt_residual(corner, std::vector<double>{0.0, 0.0},
                                 uniform_spec(2, RegKind::kShannonPair, 1.0)),
                    BoundaryPoint);
  }
}

TEST_CASE("entropy helpers") {
  SUBCASE("uniform entropy is ln K") {
    const std::vector<double> p(5, 0.2);
    CHECK(shannon_entropy(p) == doctest::Approx(std::log(5.0)).epsilon(1e-12));
  }
  SUBCASE("point mass has zero entropy and zero pair sums") {
    const std::vector<double> p{1.0, 0.0, 0.0};
    const std::vector<int> coords{1, 2, 3};
    CHECK(shannon_entropy(p) == 0.0);
    CHECK(pair_entropy_sum(p, coords) == 0.0);
    CHECK(pair_variance_sum(p, coords) == 0.0);
  }
  SUBCASE("pair variance over a coordinate subset") {
    const std::vector<double> p{0.5, 0.3, 0.2};
    const std::vector<int> coords{1, 2};
    CHECK(pair_variance_sum(p, coords) == doctest::Approx(0.46).epsilon(1e-12));
  }
  SUBCASE("pair entropy dominates pair variance") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 50; ++trial) {
      const auto p = gbtest::random_simplex_point(6, rng);
      const std::vector<int> coords{1, 3, 5};
      CHECK(pair_entropy_sum(p, coords) >= pair_variance_sum(p, coords) - 1e-12);
    }
  }
}

TEST_CASE("solver invariants") {
  std::mt19937_64 rng(321);
  std::uniform_real_distribution<double> loss(0.0, 12.0);

  SUBCASE("translation invariance") {
    for (int trial = 0; trial < 30; ++trial) {
      const int k = 2 + static_cast<int>(rng() % 6);
      const auto spec = random_mixed_spec(k, rng);
      std::vector<double> losses(static_cast<std::size_t>(k));
      for (double& v : losses) v = loss(rng);
      const auto q = solve_separable(losses, spec);
      std::vector<double> shifted = losses;
      for (double& v : shifted) v += 4.25;
      const auto q2 = solve_separable(shifted, spec);
      CHECK(max_abs_diff(q.p, q2.p) < 1e-9);
    }
  }

  SUBCASE("raising one loss never raises that coordinate") {
    for (int trial = 0; trial < 30; ++trial) {
      const int k = 2 + static_cast<int>(rng() % 6);
      const auto spec = random_mixed_spec(k, rng);
      std::vector<double> losses(static_cast<std::size_t>(k));
      for (double& v : losses) v = loss(rng);
      const auto q = solve_separable(losses, spec);
      const int bump = static_cast<int>(rng() % k);
      std::vector<double> raised = losses;
      raised[static_cast<std::size_t>(bump)] += 1.5;
      const auto q2 = solve_separable(raised, spec);
      CHECK(q2[bump] <= q[bump] + 1e-9);
    }
  }

  SUBCASE("entropy bound holds for solver outputs and random points") {
    for (int trial = 0; trial < 40; ++trial) {
      const int k = 2 + static_cast<int>(rng() % 7);
      std::vector<double> losses(static_cast<std::size_t>(k));
      for (double& v : losses) v = loss(rng);
      const auto q = solve_shannon(losses, 1.0 + loss(rng));
      const double entropy = shannon_entropy(q.p);
      for (int i = 0; i < k; ++i) {
        CHECK(entropy <= gbtest::entropy_bound_rhs(1.0 - q[i], k) + 1e-9);
      }
      const auto r = gbtest::random_simplex_point(k, rng, 0.0);
      const double entropy_r = shannon_entropy(r);
      for (int i = 0; i < k; ++i) {
        CHECK(entropy_r <= gbtest::entropy_bound_rhs(1.0 - r[static_cast<std::size_t>(i)], k) + 1e-9);
      }
    }
  }

  SUBCASE("mix_uniform arithmetic") {
    SimplexPoint q{std::vector<double>{2.0 / 3, 1.0 / 3}};
    const auto p = mix_uniform(q, 0.1);
    CHECK(p[0] == doctest::Approx(0.65).epsilon(1e-12));
    CHECK(p[1] == doctest::Approx(0.35).epsilon(1e-12));
    const std::vector<int> support{1};
    const auto pd = mix_uniform(q, 0.3, support);
    CHECK(pd[0] == doctest::Approx(0.7 * 2.0 / 3 + 0.3).epsilon(1e-12));
    CHECK(pd[1] == doctest::Approx(0.7 / 3).epsilon(1e-12));
  }
}
