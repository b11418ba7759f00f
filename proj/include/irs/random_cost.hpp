#pragma once

#include <optional>
#include <string>
#include <vector>

#include "irs/bayes.hpp"
#include "irs/policies.hpp"
#include "irs/rng.hpp"

namespace irs {

/// Two-point random cost: C = cost_low or cost_high, with an independent
/// Beta belief over P[C = cost_high].  cost_low == cost_high recovers a
/// deterministic cost exactly.
struct CostModel {
  long long cost_low = 1;
  long long cost_high = 1;
  BeliefState prior;

  double mean_cost(double theta) const {
    return static_cast<double>(cost_low) +
           static_cast<double>(cost_high - cost_low) * theta;
  }
};
void validate(const CostModel& model);

struct RandomCostArm {
  CostModel cost;
  RewardModel model;
  BeliefState reward_prior;
};

struct RandomCostInstance {
  std::vector<RandomCostArm> arms;
  long long budget = 0;

  int num_arms() const { return static_cast<int>(arms.size()); }
  long long min_cost_low() const;
  /// Plays can never exceed floor(budget / min cost_low) + 1.
  long long horizon_cap() const;
};
void validate(const RandomCostInstance& instance);

struct RandomCostState {
  std::vector<BeliefState> reward_beliefs;
  std::vector<BeliefState> cost_beliefs;
  std::vector<long long> pull_counts;
  long long remaining_budget = 0;
};
RandomCostState initial_state(const RandomCostInstance& instance);

/// Posterior predictive mean cost of an arm under the current cost belief.
double mean_cost(const CostModel& model, const BeliefState& belief);

/// Advances the state after a completed (non-aborted) play: the reward
/// belief absorbs the reward, the cost belief absorbs the high-cost
/// indicator, and the realized cost is charged.
void apply_observation(const RandomCostInstance& instance,
                       RandomCostState& state, int arm, long long reward,
                       long long realized_cost);

/// Separate reward-side and cost-side randomness, so that degenerate-cost
/// instances consume the reward stream exactly like the deterministic-cost
/// policies do.
struct PolicyRng {
  RngStream reward;
  RngStream cost;
};

enum class RandomCostPolicyKind {
  kBtsSext,
  kIrsFhSext,
  kIrsVZeroSext,
  kIrsIndexSext,
  kIrsVZeroPext,
  kIrsVEmaxPext,
  kIrsIndexPext,
};

const char* random_cost_policy_name(RandomCostPolicyKind kind);
std::optional<RandomCostPolicyKind> parse_random_cost_policy_kind(
    const std::string& name);

/// One decision.  A returned play is affordable against the arm's sampled or
/// smallest possible cost; the realized cost may still overshoot the budget,
/// which the episode driver treats as an aborted final play.
Decision random_cost_step(RandomCostPolicyKind kind,
                          const PolicyConfig& config,
                          const RandomCostInstance& instance,
                          const RandomCostState& state, PolicyRng& rng);

/// One posterior sample of an arm's cost/reward future, truncated at the
/// first play whose sampled cost no longer fits the remaining budget.
struct CostRewardPath {
  double theta_reward = 0.0;
  double theta_cost = 0.0;
  std::vector<long long> rewards;          // observed rewards, plays 1..n
  std::vector<long long> costs;            // sampled costs, plays 1..n
  std::vector<long long> cost_prefix;      // cumulative cost, indices 0..n
  std::vector<double> reward_estimates;    // posterior mean rewards, 0..n
  std::vector<double> cost_estimates;      // posterior mean costs, 0..n
  std::vector<BeliefState> reward_beliefs; // reward belief path, 0..n

  long long plays() const { return static_cast<long long>(rewards.size()); }
};
CostRewardPath sample_cost_reward_path(const RandomCostArm& arm,
                                       const BeliefState& reward_belief,
                                       const BeliefState& cost_belief,
                                       long long budget, PolicyRng& rng);

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;
};

/// Monte-Carlo estimate of the budgeted Thompson-sampling bound
/// B * E[max_a mean_reward(theta_r) / mean_cost(theta_c)].
MeanSe estimate_w_bts_random(const RandomCostInstance& instance,
                             long long samples, RngStream& rng);

}  // namespace irs
