#include "irs/policies.hpp"

#include <algorithm>

#include "irs/common.hpp"

namespace irs {

namespace {

std::vector<double> arm_costs(const BanditInstance& instance) {
  std::vector<double> costs(instance.arms.size());
  for (std::size_t a = 0; a < costs.size(); ++a) {
    costs[a] = static_cast<double>(instance.arms[a].cost);
  }
  return costs;
}

Decision play_if_affordable(const BanditInstance& instance,
                            const PolicyState& state, int arm) {
  if (instance.arms[arm].cost > state.remaining_budget) {
    return Decision::Stop();
  }
  return Decision::Play(arm);
}

/// Future-sample horizon of the finite-horizon estimate: one less than the
/// number of plays the budget allows, clamped at zero for unaffordable arms.
long long fh_horizon(long long budget, long long cost) {
  return std::max<long long>(0, budget / cost - 1);
}

}  // namespace

const char* policy_name(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::kBts: return "bts";
    case PolicyKind::kIrsFh: return "irs_fh";
    case PolicyKind::kIrsVZero: return "irs_vzero";
    case PolicyKind::kIrsVEmax: return "irs_vemax";
    case PolicyKind::kIrsIndex: return "irs_index";
  }
  return "?";
}

std::optional<PolicyKind> parse_policy_kind(const std::string& name) {
  if (name == "bts") return PolicyKind::kBts;
  if (name == "irs_fh") return PolicyKind::kIrsFh;
  if (name == "irs_vzero") return PolicyKind::kIrsVZero;
  if (name == "irs_vemax") return PolicyKind::kIrsVEmax;
  if (name == "irs_index") return PolicyKind::kIrsIndex;
  return std::nullopt;
}

PolicyState initial_state(const BanditInstance& instance) {
  PolicyState state;
  state.beliefs.reserve(instance.arms.size());
  for (const ArmSpec& arm : instance.arms) {
    state.beliefs.push_back(arm.prior);
  }
  state.pull_counts.assign(instance.arms.size(), 0);
  state.remaining_budget = instance.budget;
  return state;
}

void apply_observation(const BanditInstance& instance, PolicyState& state,
                       int arm, long long reward) {
  if (arm < 0 || arm >= instance.num_arms()) {
    throw InvalidInput("apply_observation: arm index out of range");
  }
  state.beliefs[arm] =
      update_belief(state.beliefs[arm], instance.arms[arm].model, reward);
  state.pull_counts[arm] += 1;
  state.remaining_budget -= instance.arms[arm].cost;
}

Decision bts_decide(const BanditInstance& instance, const PolicyState& state,
                    const std::vector<double>& sampled_theta) {
  std::vector<double> values(instance.arms.size());
  for (std::size_t a = 0; a < values.size(); ++a) {
    values[a] = instance.arms[a].model.mean_reward(sampled_theta[a]);
  }
  return play_if_affordable(instance, state,
                            ratio_argmax(values, arm_costs(instance)));
}

Decision bts_step(const BanditInstance& instance, const PolicyState& state,
                  RngStream& rng) {
  std::vector<double> theta(instance.arms.size());
  for (std::size_t a = 0; a < theta.size(); ++a) {
    theta[a] = sample_theta(state.beliefs[a], rng);
  }
  return bts_decide(instance, state, theta);
}

Decision irs_fh_decide(const BanditInstance& instance, const PolicyState& state,
                       const std::vector<double>& terminal_estimates) {
  return play_if_affordable(
      instance, state, ratio_argmax(terminal_estimates, arm_costs(instance)));
}

Decision irs_fh_step(const BanditInstance& instance, const PolicyState& state,
                     RngStream& rng) {
  std::vector<double> estimates(instance.arms.size());
  for (std::size_t a = 0; a < estimates.size(); ++a) {
    const ArmSpec& arm = instance.arms[a];
    estimates[a] = sample_estimate_terminal(
        state.beliefs[a], arm.model,
        fh_horizon(state.remaining_budget, arm.cost), rng);
  }
  return irs_fh_decide(instance, state, estimates);
}

namespace {

std::vector<SampledOutcome> sample_outcomes(const BanditInstance& instance,
                                            const PolicyState& state,
                                            RngStream& rng) {
  std::vector<SampledOutcome> outcomes(instance.arms.size());
  for (std::size_t a = 0; a < outcomes.size(); ++a) {
    const ArmSpec& arm = instance.arms[a];
    outcomes[a] = sample_outcome(state.beliefs[a], arm.model,
                                 state.remaining_budget / arm.cost, rng);
  }
  return outcomes;
}

Decision play_largest_count(const BanditInstance& instance,
                            const PolicyState& state,
                            const std::vector<long long>& counts) {
  int best = -1;
  long long best_count = 0;
  for (std::size_t a = 0; a < counts.size(); ++a) {
    if (counts[a] > best_count) {
      best_count = counts[a];
      best = static_cast<int>(a);
    }
  }
  if (best < 0) return Decision::Stop();
  return play_if_affordable(instance, state, best);
}

}  // namespace

Decision irs_vzero_decide(const BanditInstance& instance,
                          const PolicyState& state,
                          const std::vector<SampledOutcome>& outcomes) {
  std::vector<std::vector<double>> payoff(outcomes.size());
  std::vector<long long> costs(outcomes.size());
  for (std::size_t a = 0; a < outcomes.size(); ++a) {
    const long long horizon = state.remaining_budget / instance.arms[a].cost;
    payoff[a].assign(outcomes[a].prefix_payoff.begin(),
                     outcomes[a].prefix_payoff.begin() + horizon + 1);
    costs[a] = instance.arms[a].cost;
  }
  const Allocation alloc =
      allocation_dp(payoff, costs, state.remaining_budget);
  return play_largest_count(instance, state, alloc.counts);
}

Decision irs_vzero_step(const BanditInstance& instance,
                        const PolicyState& state, RngStream& rng) {
  return irs_vzero_decide(instance, state, sample_outcomes(instance, state, rng));
}

Decision irs_vemax_decide(const BanditInstance& instance,
                          const PolicyState& state,
                          const std::vector<SampledOutcome>& outcomes,
                          const PolicyConfig& config) {
  std::vector<RewardModel> models(instance.arms.size());
  std::vector<long long> costs(instance.arms.size());
  for (std::size_t a = 0; a < models.size(); ++a) {
    models[a] = instance.arms[a].model;
    costs[a] = instance.arms[a].cost;
  }
  const LatticeResult lattice = emax_lattice_dp(
      outcomes, state.beliefs, models, costs, state.remaining_budget,
      config.quad_nodes, config.emax_arm_cap);
  if (!lattice.play) return Decision::Stop();
  return play_if_affordable(instance, state, lattice.first_action);
}

Decision irs_vemax_step(const BanditInstance& instance,
                        const PolicyState& state, RngStream& rng,
                        const PolicyConfig& config) {
  return irs_vemax_decide(instance, state,
                          sample_outcomes(instance, state, rng), config);
}

Decision irs_index_decide(const BanditInstance& instance,
                          const PolicyState& state,
                          const std::vector<SampledOutcome>& outcomes,
                          const PolicyConfig& config) {
  std::vector<double> index(instance.arms.size());
  for (std::size_t a = 0; a < index.size(); ++a) {
    const ArmSpec& arm = instance.arms[a];
    const long long horizon = state.remaining_budget / arm.cost;
    const std::vector<BeliefState> path =
        belief_path(state.beliefs[a], arm.model, outcomes[a].rewards);
    index[a] = index_bisect(path, outcomes[a].estimate_path, arm.model,
                            horizon, config.bisect_tol, config.bisect_max_iter)
                   .lambda_star;
  }
  return play_if_affordable(instance, state,
                            ratio_argmax(index, arm_costs(instance)));
}

Decision irs_index_step(const BanditInstance& instance,
                        const PolicyState& state, RngStream& rng,
                        const PolicyConfig& config) {
  return irs_index_decide(instance, state,
                          sample_outcomes(instance, state, rng), config);
}

Decision policy_step(PolicyKind kind, const PolicyConfig& config,
                     const BanditInstance& instance, const PolicyState& state,
                     RngStream& rng) {
  switch (kind) {
    case PolicyKind::kBts: return bts_step(instance, state, rng);
    case PolicyKind::kIrsFh: return irs_fh_step(instance, state, rng);
    case PolicyKind::kIrsVZero: return irs_vzero_step(instance, state, rng);
    case PolicyKind::kIrsVEmax:
      return irs_vemax_step(instance, state, rng, config);
    case PolicyKind::kIrsIndex:
      return irs_index_step(instance, state, rng, config);
  }
  throw InvalidInput("policy_step: unknown kind");
}

std::optional<Decision> deterministic_decision(PolicyKind kind,
                                               const PolicyConfig& config,
                                               const BanditInstance& instance,
                                               const PolicyState& state) {
  (void)config;
  // One arm: every policy in the family plays it while affordable.  (For the
  // lattice policy this follows from the full-pull plan having penalized
  // value N * muhat_0 > 0 on every sampled future.)
  if (instance.num_arms() == 1) {
    return play_if_affordable(instance, state, 0);
  }
  // With at most one play affordable per arm, the sampled futures drop out
  // of the finite-horizon, allocation and index rules: all three reduce to
  // the myopic posterior-mean-per-cost choice.
  bool myopic = true;
  for (const ArmSpec& arm : instance.arms) {
    if (state.remaining_budget / arm.cost > 1) myopic = false;
  }
  if (!myopic) return std::nullopt;

  switch (kind) {
    case PolicyKind::kIrsFh:
    case PolicyKind::kIrsIndex: {
      std::vector<double> means(instance.arms.size());
      for (std::size_t a = 0; a < means.size(); ++a) {
        means[a] = posterior_mean(state.beliefs[a], instance.arms[a].model);
      }
      return play_if_affordable(instance, state,
                                ratio_argmax(means, arm_costs(instance)));
    }
    case PolicyKind::kIrsVZero: {
      // 0/1 allocations: the optimum keeps every affordable arm that fits;
      // the played arm is the smallest-index one with count 1.
      std::vector<std::vector<double>> payoff(instance.arms.size());
      std::vector<long long> costs(instance.arms.size());
      for (std::size_t a = 0; a < payoff.size(); ++a) {
        payoff[a] = {0.0};
        if (instance.arms[a].cost <= state.remaining_budget) {
          payoff[a].push_back(
              posterior_mean(state.beliefs[a], instance.arms[a].model));
        }
        costs[a] = instance.arms[a].cost;
      }
      const Allocation alloc =
          allocation_dp(payoff, costs, state.remaining_budget);
      for (std::size_t a = 0; a < alloc.counts.size(); ++a) {
        if (alloc.counts[a] > 0) {
          return play_if_affordable(instance, state, static_cast<int>(a));
        }
      }
      return Decision::Stop();
    }
    default:
      return std::nullopt;
  }
}

}  // namespace irs
