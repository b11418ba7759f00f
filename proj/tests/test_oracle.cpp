// Exact-value oracles.  The tiny two-arm instance (unit costs, budget 2,
// uniform Bernoulli priors) has a fully hand-derivable bound chain:
//   W_BTS = 4/3,  W_FH = 7/6,  W_VZero = 9/8,  V* = 13/12.
// Everything else is cross-checked against Monte Carlo or brute force.

#include <algorithm>
#include <cmath>
#include <vector>

#include <doctest.h>

#include "irs/bounds.hpp"
#include "irs/common.hpp"
#include "irs/oracle.hpp"
#include "irs/rng.hpp"
#include "irs/special.hpp"

using irs::BanditInstance;
using irs::BeliefState;
using irs::ExactBoundKind;
using irs::PolicyKind;
using irs::RewardModel;
using irs::Tally;

namespace {

BanditInstance tiny_instance() {
  BanditInstance inst;
  inst.budget = 2;
  inst.arms.push_back({1, RewardModel{1}, BeliefState{1.0, 1.0}});
  inst.arms.push_back({1, RewardModel{1}, BeliefState{1.0, 1.0}});
  return inst;
}

BanditInstance lumpy_instance() {
  BanditInstance inst;
  inst.budget = 6;
  inst.arms.push_back({2, RewardModel{1}, BeliefState{1.0, 2.0}});
  inst.arms.push_back({3, RewardModel{2}, BeliefState{2.0, 1.0}});
  return inst;
}

}  // namespace

TEST_CASE("value table reproduces the hand-derived optimum") {
  const auto inst = tiny_instance();
  const auto table = irs::ValueTable::build(inst);
  // Play once; on success (1/2) the posterior mean 2/3 beats the fresh arm,
  // on failure switch to the fresh arm at 1/2:
  //   V* = 1/2 + (1/2)(2/3) + (1/2)(1/2) = 13/12.
  CHECK(table.vstar_root() == doctest::Approx(13.0 / 12.0).epsilon(1e-12));
  // Interior state: one success on arm 0, one unit of budget left.
  CHECK(table.vstar(1, {Tally{1, 1}, Tally{0, 0}}) ==
        doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  // One failure on arm 0: the fresh arm is better.
  CHECK(table.vstar(1, {Tally{1, 0}, Tally{0, 0}}) ==
        doctest::Approx(0.5).epsilon(1e-12));
  CHECK(table.state_count() > 0);
  // Posterior bookkeeping.
  const BeliefState b = table.belief_at(0, Tally{3, 2});
  CHECK(b.alpha == doctest::Approx(3.0));
  CHECK(b.beta == doctest::Approx(2.0));
  // A state the dynamics cannot reach is a lookup error.
  CHECK_THROWS_AS(table.vstar(2, {Tally{5, 5}, Tally{0, 0}}),
                  irs::InvalidInput);
}

TEST_CASE("single-arm optimum is the martingale closed form") {
  BanditInstance solo;
  solo.budget = 7;
  solo.arms.push_back({2, RewardModel{3}, BeliefState{2.0, 5.0}});
  const auto table = irs::ValueTable::build(solo);
  // Always playing is optimal (values are nonnegative); the expected total
  // is floor(B/c) plays of the prior mean.
  CHECK(table.vstar_root() ==
        doctest::Approx(3.0 * (3.0 * 2.0 / 7.0)).epsilon(1e-12));
}

TEST_CASE("value table capacity guard") {
  BanditInstance wide;
  wide.budget = 40;
  for (int a = 0; a < 3; ++a) {
    wide.arms.push_back({1, RewardModel{2}, BeliefState{1.0, 1.0}});
  }
  CHECK_THROWS_AS(irs::ValueTable::build(wide, 500), irs::CapacityError);
}

TEST_CASE("reward path enumeration carries the predictive law") {
  const BeliefState prior{1.0, 1.0};
  const RewardModel model{1};
  const auto paths = irs::enumerate_reward_paths(prior, model, 2, 100);
  REQUIRE(paths.paths.size() == 4);
  REQUIRE(paths.probs.size() == 4);
  double total = 0.0;
  for (std::size_t i = 0; i < paths.paths.size(); ++i) {
    total += paths.probs[i];
    // P(path) = product of one-step Beta-Binomial predictives.
    BeliefState b = prior;
    double expect = 1.0;
    for (long long r : paths.paths[i]) {
      expect *= irs::beta_binomial_pmf(model.trials, b.alpha, b.beta, r);
      b = irs::update_belief(b, model, r);
    }
    CHECK(paths.probs[i] == doctest::Approx(expect).epsilon(1e-12));
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  // Persistent-success path (1, 1) has probability 1/2 * 2/3 = 1/3.
  const std::vector<long long> ones{1, 1};
  for (std::size_t i = 0; i < paths.paths.size(); ++i) {
    if (paths.paths[i] == ones) {
      CHECK(paths.probs[i] == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    }
  }
  CHECK_THROWS_AS(irs::enumerate_reward_paths(prior, model, 2, 3),
                  irs::CapacityError);
}

TEST_CASE("exact bound chain on the tiny instance") {
  const auto inst = tiny_instance();
  const double bts = irs::exact_bound(ExactBoundKind::kBtsFractional, inst);
  const double bts_int = irs::exact_bound(ExactBoundKind::kBtsInteger, inst);
  const double fh = irs::exact_bound(ExactBoundKind::kIrsFh, inst);
  const double fh_int = irs::exact_bound(ExactBoundKind::kIrsFhInteger, inst);
  const double vz = irs::exact_bound(ExactBoundKind::kIrsVZero, inst);
  const auto table = irs::ValueTable::build(inst);
  CHECK(bts == doctest::Approx(4.0 / 3.0).epsilon(1e-12));
  CHECK(fh == doctest::Approx(7.0 / 6.0).epsilon(1e-12));
  CHECK(vz == doctest::Approx(9.0 / 8.0).epsilon(1e-12));
  // Unit costs make the integer and fractional relaxations coincide.
  CHECK(bts_int == doctest::Approx(bts).epsilon(1e-9));
  CHECK(fh_int == doctest::Approx(fh).epsilon(1e-12));
  // The chain is strictly ordered here.
  CHECK(bts > fh);
  CHECK(fh > vz);
  CHECK(vz > table.vstar_root());
}

TEST_CASE("exact bounds agree with their Monte-Carlo estimators") {
  // Two independent implementations of the same quantity: exhaustive
  // enumeration (oracle) versus sampling (bounds), on a lumpier instance.
  const auto inst = lumpy_instance();
  struct Pair {
    ExactBoundKind exact_kind;
    irs::BoundKind mc_kind;
  };
  const Pair pairs[] = {{ExactBoundKind::kBtsFractional, irs::BoundKind::kBts},
                        {ExactBoundKind::kIrsFh, irs::BoundKind::kIrsFh},
                        {ExactBoundKind::kIrsVZero, irs::BoundKind::kIrsVZero}};
  for (const Pair& p : pairs) {
    const double exact = irs::exact_bound(p.exact_kind, inst);
    irs::RngStream rng(irs::derive_seed(
        {11, static_cast<std::uint64_t>(p.mc_kind)}));
    const auto est = irs::estimate_bound(p.mc_kind, inst, 60000, rng);
    CHECK(std::abs(est.mean - exact) <= 4.0 * est.se);
  }
}

TEST_CASE("integer BTS bound matches brute force over allocations") {
  const auto inst = lumpy_instance();
  const double exact = irs::exact_bound(ExactBoundKind::kBtsInteger, inst);
  irs::RngStream rng(37);
  double mean = 0.0, sq = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double t0 = irs::sample_theta(inst.arms[0].prior, rng);
    const double t1 = irs::sample_theta(inst.arms[1].prior, rng);
    const double v0 = inst.arms[0].model.max_reward() * t0;
    const double v1 = inst.arms[1].model.max_reward() * t1;
    double best = 0.0;
    for (long long n0 = 0; n0 * inst.arms[0].cost <= inst.budget; ++n0) {
      for (long long n1 = 0;
           n0 * inst.arms[0].cost + n1 * inst.arms[1].cost <= inst.budget;
           ++n1) {
        best = std::max(best, static_cast<double>(n0) * v0 +
                                  static_cast<double>(n1) * v1);
      }
    }
    mean += best;
    sq += best * best;
  }
  mean /= n;
  const double se = std::sqrt((sq / n - mean * mean) / n);
  CHECK(std::abs(exact - mean) <= 4.0 * se);
  // Fractional dominates integer.
  CHECK(irs::exact_bound(ExactBoundKind::kBtsFractional, inst) >=
        exact - 1e-12);
  // Three arms exceed the piecewise-exact machinery.
  BanditInstance three = inst;
  three.arms.push_back({1, RewardModel{1}, BeliefState{1.0, 1.0}});
  CHECK_THROWS_AS(irs::exact_bound(ExactBoundKind::kBtsInteger, three),
                  irs::CapacityError);
}

TEST_CASE("exact policy values: closed forms and deterministic walks") {
  const irs::PolicyConfig config;
  // Single arm: every policy plays until the budget runs out; the value is
  // floor(B/c) times the prior mean.
  BanditInstance solo;
  solo.budget = 11;
  solo.arms.push_back({3, RewardModel{2}, BeliefState{2.0, 3.0}});
  for (PolicyKind kind :
       {PolicyKind::kBts, PolicyKind::kIrsFh, PolicyKind::kIrsVZero,
        PolicyKind::kIrsVEmax, PolicyKind::kIrsIndex}) {
    const auto pv = irs::exact_policy_value(kind, config, solo);
    CHECK(pv.exact);
    CHECK(pv.se == 0.0);
    CHECK(pv.value == doctest::Approx(3.0 * (2.0 * 2.0 / 5.0)).epsilon(1e-12));
  }
  // Myopic two-arm instance: the ratio rule picks arm 1 (3/4 over cost 3
  // beats 1/4 over cost 2), plays it once, and stops.
  BanditInstance duo;
  duo.budget = 3;
  duo.arms.push_back({2, RewardModel{1}, BeliefState{1.0, 3.0}});
  duo.arms.push_back({3, RewardModel{1}, BeliefState{3.0, 1.0}});
  for (PolicyKind kind :
       {PolicyKind::kIrsFh, PolicyKind::kIrsVZero, PolicyKind::kIrsIndex}) {
    const auto pv = irs::exact_policy_value(kind, config, duo);
    CHECK(pv.exact);
    CHECK(pv.value == doctest::Approx(0.75).epsilon(1e-12));
  }
}

TEST_CASE("Monte-Carlo fallback is seeded and sane") {
  const irs::PolicyConfig config;
  const auto inst = tiny_instance();
  const auto a =
      irs::exact_policy_value(PolicyKind::kBts, config, inst, 4000, 99);
  const auto b =
      irs::exact_policy_value(PolicyKind::kBts, config, inst, 4000, 99);
  CHECK(!a.exact);
  CHECK(a.episodes == 4000);
  CHECK(a.value == b.value);  // same seed, same estimate
  CHECK(a.se == b.se);
  CHECK(a.se > 0.0);
  // The policy value cannot beat the Lagrangian bound nor fall below zero,
  // and on this instance it should be close to V*.
  const auto table = irs::ValueTable::build(inst);
  CHECK(a.value >= 0.0);
  CHECK(a.value <= 4.0 / 3.0 + 4.0 * a.se);
  CHECK(std::abs(a.value - table.vstar_root()) <= 0.2);
}
