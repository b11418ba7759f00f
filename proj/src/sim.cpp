#include "irs/sim.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <functional>
#include <thread>

#include "irs/common.hpp"

namespace irs {
namespace {

// Distinct stream tags for the two policy families, so a deterministic-cost
// policy and its random-cost extension never share episode randomness.
std::uint64_t stream_tag(PolicyKind kind) {
  return static_cast<std::uint64_t>(kind);
}
std::uint64_t stream_tag(RandomCostPolicyKind kind) {
  return 0x100ULL + static_cast<std::uint64_t>(kind);
}

void parallel_for(long long count, int threads,
                  const std::function<void(long long)>& body) {
  if (threads <= 1 || count < 2) {
    for (long long i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<long long> next{0};
  auto worker = [&] {
    while (true) {
      const long long i = next.fetch_add(1);
      if (i >= count) return;
      body(i);
    }
  };
  std::vector<std::thread> pool;
  const int spawn = static_cast<int>(
      std::min<long long>(threads, count));
  pool.reserve(static_cast<std::size_t>(spawn));
  for (int t = 0; t < spawn; ++t) pool.emplace_back(worker);
  for (std::thread& t : pool) t.join();
}

// Episode-order mean and standard error (two passes, compensated sums).
void reduce_values(const std::vector<double>& values, double* mean,
                   double* se) {
  const auto n = static_cast<double>(values.size());
  StableSum sum;
  for (double v : values) sum.add(v);
  *mean = sum.value() / n;
  StableSum sq;
  for (double v : values) sq.add((v - *mean) * (v - *mean));
  *se = std::sqrt(sq.value() / (n - 1.0) / n);
}

template <typename Instance, typename Kind, typename RunEpisode,
          typename BoundFn>
std::vector<RegretReport> run_reports(
    const Instance& instance,
    const std::vector<std::pair<Kind, PolicyConfig>>& policies,
    const ExperimentOptions& options, const RunEpisode& run_one,
    const BoundFn& bound_fn, const char* (*name_fn)(Kind)) {
  validate(instance);
  if (options.episodes < 2) {
    throw InvalidInput("experiments need at least two episodes");
  }
  const MeanSe w_bts = bound_fn();
  std::vector<RegretReport> reports;
  reports.reserve(policies.size());
  std::vector<double> values;
  for (const auto& [kind, config] : policies) {
    values.assign(static_cast<std::size_t>(options.episodes), 0.0);
    const auto start = std::chrono::steady_clock::now();
    parallel_for(options.episodes, options.threads, [&](long long ep) {
      values[static_cast<std::size_t>(ep)] =
          run_one(kind, config, static_cast<std::uint64_t>(ep));
    });
    const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                             std::chrono::steady_clock::now() - start)
                             .count();
    RegretReport report;
    report.policy = name_fn(kind);
    report.budget = instance.budget;
    report.episodes = options.episodes;
    reduce_values(values, &report.mean_value, &report.value_se);
    report.w_bts = w_bts.mean;
    report.w_bts_se = w_bts.se;
    report.regret = w_bts.mean - report.mean_value;
    report.regret_se = std::sqrt(report.value_se * report.value_se +
                                 w_bts.se * w_bts.se);
    report.wall_ms = options.fixed_wall_ms.value_or(elapsed);
    reports.push_back(std::move(report));
  }
  return reports;
}

}  // namespace

EpisodeLog run_episode(const BanditInstance& instance, PolicyKind kind,
                       const PolicyConfig& config, RngStream& env,
                       RngStream& policy) {
  EpisodeLog log;
  std::vector<double> theta(instance.arms.size());
  for (std::size_t a = 0; a < theta.size(); ++a) {
    theta[a] = sample_theta(instance.arms[a].prior, env);
  }
  PolicyState state = initial_state(instance);
  const long long cap = instance.horizon_cap();
  for (long long t = 0; t < cap; ++t) {
    const Decision d = policy_step(kind, config, instance, state, policy);
    if (!d.play) break;
    const ArmSpec& arm = instance.arms[static_cast<std::size_t>(d.arm)];
    log.predictive_means.push_back(
        posterior_mean(state.beliefs[static_cast<std::size_t>(d.arm)],
                       arm.model));
    const long long reward =
        env.binomial(arm.model.trials, theta[static_cast<std::size_t>(d.arm)]);
    log.actions.push_back(d.arm);
    log.rewards.push_back(reward);
    log.costs.push_back(arm.cost);
    log.total_reward += static_cast<double>(reward);
    log.total_cost += arm.cost;
    apply_observation(instance, state, d.arm, reward);
  }
  return log;
}

EpisodeLog run_episode_random(const RandomCostInstance& instance,
                              RandomCostPolicyKind kind,
                              const PolicyConfig& config, RngStream& env,
                              PolicyRng& policy) {
  EpisodeLog log;
  std::vector<double> theta_reward(instance.arms.size());
  std::vector<double> theta_cost(instance.arms.size());
  for (std::size_t a = 0; a < instance.arms.size(); ++a) {
    theta_reward[a] = sample_theta(instance.arms[a].reward_prior, env);
  }
  for (std::size_t a = 0; a < instance.arms.size(); ++a) {
    theta_cost[a] = sample_theta(instance.arms[a].cost.prior, env);
  }
  RandomCostState state = initial_state(instance);
  const long long cap = instance.horizon_cap();
  for (long long t = 0; t < cap; ++t) {
    const Decision d = random_cost_step(kind, config, instance, state, policy);
    if (!d.play) break;
    const auto arm_index = static_cast<std::size_t>(d.arm);
    const RandomCostArm& arm = instance.arms[arm_index];
    long long cost = arm.cost.cost_low;
    if (arm.cost.cost_high > arm.cost.cost_low &&
        env.binomial(1, theta_cost[arm_index]) == 1) {
      cost = arm.cost.cost_high;
    }
    // A cost overshoot aborts the episode before any reward or update.
    if (cost > state.remaining_budget) break;
    const long long reward =
        env.binomial(arm.model.trials, theta_reward[arm_index]);
    log.predictive_means.push_back(
        posterior_mean(state.reward_beliefs[arm_index], arm.model));
    log.actions.push_back(d.arm);
    log.rewards.push_back(reward);
    log.costs.push_back(cost);
    log.total_reward += static_cast<double>(reward);
    log.total_cost += cost;
    apply_observation(instance, state, d.arm, reward, cost);
  }
  return log;
}

std::vector<RegretReport> run_experiment(
    const BanditInstance& instance,
    const std::vector<std::pair<PolicyKind, PolicyConfig>>& policies,
    const ExperimentOptions& options) {
  const auto run_one = [&](PolicyKind kind, const PolicyConfig& config,
                           std::uint64_t ep) {
    RngStream env(derive_seed(
        {options.base_seed, kEnvDomain, stream_tag(kind), ep}));
    RngStream pol(derive_seed(
        {options.base_seed, kPolicyDomain, stream_tag(kind), ep}));
    return run_episode(instance, kind, config, env, pol).total_reward;
  };
  const auto bound_fn = [&]() -> MeanSe {
    RngStream rng(derive_seed({options.base_seed, kBoundDomain,
                               static_cast<std::uint64_t>(instance.budget)}));
    const BoundEstimate est =
        estimate_bound(BoundKind::kBts, instance, options.bound_samples, rng);
    return MeanSe{est.mean, est.se};
  };
  return run_reports(instance, policies, options, run_one, bound_fn,
                     policy_name);
}

std::vector<RegretReport> run_experiment_random(
    const RandomCostInstance& instance,
    const std::vector<std::pair<RandomCostPolicyKind, PolicyConfig>>& policies,
    const ExperimentOptions& options) {
  const auto run_one = [&](RandomCostPolicyKind kind,
                           const PolicyConfig& config, std::uint64_t ep) {
    RngStream env(derive_seed(
        {options.base_seed, kEnvDomain, stream_tag(kind), ep}));
    PolicyRng pol{
        RngStream(derive_seed(
            {options.base_seed, kPolicyDomain, stream_tag(kind), ep})),
        RngStream(derive_seed({options.base_seed, kPolicyDomain, kCostDomain,
                               stream_tag(kind), ep}))};
    return run_episode_random(instance, kind, config, env, pol).total_reward;
  };
  const auto bound_fn = [&]() -> MeanSe {
    RngStream rng(derive_seed({options.base_seed, kBoundDomain,
                               static_cast<std::uint64_t>(instance.budget)}));
    return estimate_w_bts_random(instance, options.bound_samples, rng);
  };
  return run_reports(instance, policies, options, run_one, bound_fn,
                     random_cost_policy_name);
}

std::vector<RegretReport> budget_sweep(
    BanditInstance instance, const std::vector<long long>& budgets,
    const std::vector<std::pair<PolicyKind, PolicyConfig>>& policies,
    const ExperimentOptions& options) {
  std::vector<RegretReport> reports;
  for (long long budget : budgets) {
    instance.budget = budget;
    std::vector<RegretReport> rows =
        run_experiment(instance, policies, options);
    for (RegretReport& row : rows) reports.push_back(std::move(row));
  }
  return reports;
}

}  // namespace irs
