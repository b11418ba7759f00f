#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "irs/bounds.hpp"
#include "irs/policies.hpp"
#include "irs/random_cost.hpp"

namespace irs {

struct EpisodeLog {
  std::vector<int> actions;
  std::vector<long long> rewards;
  std::vector<long long> costs;
  /// Posterior-mean reward of the played arm at play time (for dual
  /// feasibility diagnostics: reward - predictive_mean has mean zero).
  std::vector<double> predictive_means;
  double total_reward = 0.0;
  long long total_cost = 0;
};

/// One full episode under a deterministic-cost policy: the environment draws
/// each arm's success rate from its prior, then the policy plays until it
/// stops or nothing is affordable.
EpisodeLog run_episode(const BanditInstance& instance, PolicyKind kind,
                       const PolicyConfig& config, RngStream& env,
                       RngStream& policy);

/// Random-cost analogue.  A play whose realized cost exceeds the remaining
/// budget aborts the episode: no reward, no charge, no belief update.
EpisodeLog run_episode_random(const RandomCostInstance& instance,
                              RandomCostPolicyKind kind,
                              const PolicyConfig& config, RngStream& env,
                              PolicyRng& policy);

struct RegretReport {
  std::string policy;
  long long budget = 0;
  long long episodes = 0;
  double mean_value = 0.0;
  double value_se = 0.0;
  double w_bts = 0.0;
  double w_bts_se = 0.0;
  double regret = 0.0;     // w_bts - mean_value (>= 0 in expectation)
  double regret_se = 0.0;  // the two estimates are independent
  long long wall_ms = 0;
};

struct ExperimentOptions {
  long long episodes = 10000;
  long long bound_samples = 100000;
  std::uint64_t base_seed = 1;
  int threads = 1;
  /// When set, every report carries this wall time instead of a measured
  /// one, making the serialized output bitwise reproducible.
  std::optional<long long> fixed_wall_ms;
};

/// Runs each policy for `episodes` independent seeded episodes and reports
/// value and regret against a shared Thompson-sampling bound estimate.
/// Per-episode streams are derived from (base_seed, policy, episode), and
/// results are reduced in episode order; the numbers do not depend on the
/// thread count.
std::vector<RegretReport> run_experiment(
    const BanditInstance& instance,
    const std::vector<std::pair<PolicyKind, PolicyConfig>>& policies,
    const ExperimentOptions& options);

std::vector<RegretReport> run_experiment_random(
    const RandomCostInstance& instance,
    const std::vector<std::pair<RandomCostPolicyKind, PolicyConfig>>& policies,
    const ExperimentOptions& options);

/// run_experiment at each budget in turn (same arms, fresh bound estimate).
std::vector<RegretReport> budget_sweep(
    BanditInstance instance, const std::vector<long long>& budgets,
    const std::vector<std::pair<PolicyKind, PolicyConfig>>& policies,
    const ExperimentOptions& options);

}  // namespace irs
