// Conjugate-update layer.  The load-bearing facts checked here: the update
// arithmetic, the tower (martingale) property of the posterior-mean path
// under the predictive law, and the distributional identity between the
// terminal estimate shortcut and the full reward-path simulation.

#include <cmath>
#include <set>
#include <vector>

#include <doctest.h>

#include "irs/bayes.hpp"
#include "irs/common.hpp"
#include "irs/rng.hpp"
#include "irs/special.hpp"

using irs::BeliefState;
using irs::RewardModel;

TEST_CASE("update_belief and posterior_mean arithmetic") {
  const RewardModel model{4};
  const BeliefState prior{2.0, 3.0};
  const BeliefState post = irs::update_belief(prior, model, 3);
  CHECK(post.alpha == doctest::Approx(5.0));
  CHECK(post.beta == doctest::Approx(4.0));
  CHECK(irs::posterior_mean(prior, model) == doctest::Approx(4.0 * 2.0 / 5.0));
  CHECK(irs::posterior_mean(post, model) == doctest::Approx(4.0 * 5.0 / 9.0));
  CHECK_THROWS_AS(irs::update_belief(prior, model, -1), irs::InvalidInput);
  CHECK_THROWS_AS(irs::update_belief(prior, model, 5), irs::InvalidInput);
}

TEST_CASE("validation rejects malformed inputs") {
  CHECK_THROWS_AS(irs::validate(BeliefState{0.0, 1.0}), irs::InvalidInput);
  CHECK_THROWS_AS(irs::validate(BeliefState{1.0, -2.0}), irs::InvalidInput);
  CHECK_THROWS_AS(irs::validate(RewardModel{0}), irs::InvalidInput);
  irs::BanditInstance inst;
  CHECK_THROWS_AS(irs::validate(inst), irs::InvalidInput);  // no arms
  inst.arms.push_back({1, RewardModel{1}, BeliefState{1.0, 1.0}});
  inst.budget = -1;
  CHECK_THROWS_AS(irs::validate(inst), irs::InvalidInput);
  inst.budget = 5;
  inst.arms[0].cost = 0;
  CHECK_THROWS_AS(irs::validate(inst), irs::InvalidInput);
  inst.arms[0].cost = 2;
  CHECK_NOTHROW(irs::validate(inst));
  CHECK(inst.horizon_cap() == 3);  // floor(5/2) + 1
}

TEST_CASE("estimate_path is the exact posterior-mean sequence") {
  const RewardModel model{3};
  const BeliefState prior{1.5, 2.5};
  const std::vector<long long> rewards{2, 0, 3};
  const auto path = irs::estimate_path(prior, model, rewards);
  REQUIRE(path.size() == 4);
  BeliefState b = prior;
  for (std::size_t i = 0; i < path.size(); ++i) {
    CHECK(path[i] == doctest::Approx(irs::posterior_mean(b, model)));
    if (i < rewards.size()) b = irs::update_belief(b, model, rewards[i]);
  }
  const auto beliefs = irs::belief_path(prior, model, rewards);
  REQUIRE(beliefs.size() == 4);
  CHECK(beliefs.back().alpha == doctest::Approx(1.5 + 5.0));
  CHECK(beliefs.back().beta == doctest::Approx(2.5 + 9.0 - 5.0));
}

TEST_CASE("posterior-mean path is a martingale under the predictive law") {
  // Tower property, exactly: sum_r P[r] * muhat(belief + r) = muhat(belief),
  // where P is the Beta-Binomial predictive pmf.
  const RewardModel model{5};
  for (const BeliefState prior : {BeliefState{1.0, 1.0}, BeliefState{3.5, 0.5},
                                  BeliefState{12.0, 14.2}}) {
    double expect = 0.0;
    for (long long r = 0; r <= model.trials; ++r) {
      const double p =
          irs::beta_binomial_pmf(model.trials, prior.alpha, prior.beta, r);
      expect += p * irs::posterior_mean(irs::update_belief(prior, model, r),
                                        model);
    }
    CHECK(expect ==
          doctest::Approx(irs::posterior_mean(prior, model)).epsilon(1e-12));
  }
}

TEST_CASE("sample_outcome structure and prefix payoffs") {
  irs::RngStream rng(42);
  const RewardModel model{4};
  const BeliefState prior{2.0, 2.0};
  const auto out = irs::sample_outcome(prior, model, 6, rng);
  CHECK(out.horizon() == 6);
  REQUIRE(out.estimate_path.size() == 7);
  REQUIRE(out.prefix_payoff.size() == 7);
  CHECK(out.theta >= 0.0);
  CHECK(out.theta <= 1.0);
  CHECK(out.prefix_payoff[0] == 0.0);
  double acc = 0.0;
  for (std::size_t i = 1; i < out.prefix_payoff.size(); ++i) {
    acc += out.estimate_path[i - 1];
    CHECK(out.prefix_payoff[i] == doctest::Approx(acc).epsilon(1e-15));
  }
  for (long long r : out.rewards) {
    CHECK(r >= 0);
    CHECK(r <= model.trials);
  }
  CHECK_THROWS_AS(irs::sample_outcome(prior, model, -1, rng),
                  irs::InvalidInput);
}

TEST_CASE("sample_estimate_terminal lands on the reachable estimate grid") {
  // The terminal estimate is a deterministic function of the total success
  // count s in {0, ..., h*m}; every draw must hit that finite grid exactly.
  irs::RngStream rng(7);
  const RewardModel model{3};
  const BeliefState prior{1.0, 2.0};
  const long long h = 4;
  std::set<double> grid;
  for (long long s = 0; s <= h * model.trials; ++s) {
    const double m = static_cast<double>(model.trials);
    grid.insert(m * (prior.alpha + s) /
                (prior.alpha + prior.beta + static_cast<double>(h) * m));
  }
  for (int i = 0; i < 200; ++i) {
    CHECK(grid.count(irs::sample_estimate_terminal(prior, model, h, rng)) ==
          1);
  }
  // Horizon zero is the prior mean with certainty.
  CHECK(irs::sample_estimate_terminal(prior, model, 0, rng) ==
        doctest::Approx(irs::posterior_mean(prior, model)));
}

TEST_CASE("terminal estimate shortcut matches the full path in law") {
  // Both estimators are unbiased for the prior mean (tower property); with
  // matched sample sizes their Monte-Carlo means agree within joint error.
  irs::RngStream rng_a(101), rng_b(202);
  const RewardModel model{2};
  const BeliefState prior{1.5, 1.0};
  const long long h = 5;
  const int n = 20000;
  double mean_a = 0.0, mean_b = 0.0, sq_a = 0.0, sq_b = 0.0;
  for (int i = 0; i < n; ++i) {
    const double a = irs::sample_estimate_terminal(prior, model, h, rng_a);
    const double b =
        irs::sample_outcome(prior, model, h, rng_b).estimate_path[h];
    mean_a += a;
    mean_b += b;
    sq_a += a * a;
    sq_b += b * b;
  }
  mean_a /= n;
  mean_b /= n;
  const double var_a = sq_a / n - mean_a * mean_a;
  const double var_b = sq_b / n - mean_b * mean_b;
  const double joint_se = std::sqrt((var_a + var_b) / n);
  CHECK(std::abs(mean_a - mean_b) <= 4.0 * joint_se);
  // Same second moment too (same law, not just same mean).
  const double se2 = std::sqrt(2.0 * (var_a * var_a + var_b * var_b) / n);
  CHECK(std::abs(var_a - var_b) <= 6.0 * se2 + 1e-6);
  // And both unbiased for the prior mean.
  const double prior_mean = irs::posterior_mean(prior, model);
  CHECK(std::abs(mean_a - prior_mean) <= 4.0 * std::sqrt(var_a / n));
}

TEST_CASE("degenerate beliefs behave as point masses") {
  irs::RngStream rng(5);
  const BeliefState point{0.3e18, 0.7e18};  // total 1e18, mean 0.3
  CHECK(irs::sample_theta(point, rng) == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(irs::sample_theta(point, rng) == irs::sample_theta(point, rng));
}
