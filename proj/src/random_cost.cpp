#include "irs/random_cost.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "irs/common.hpp"
#include "irs/solvers.hpp"
#include "irs/special.hpp"

namespace irs {

void validate(const CostModel& model) {
  if (model.cost_low < 1) {
    throw InvalidInput("cost_low must be a positive integer");
  }
  if (model.cost_high < model.cost_low) {
    throw InvalidInput("cost_high must be >= cost_low");
  }
  validate(model.prior);
}

long long RandomCostInstance::min_cost_low() const {
  long long lowest = std::numeric_limits<long long>::max();
  for (const RandomCostArm& arm : arms) {
    lowest = std::min(lowest, arm.cost.cost_low);
  }
  return lowest;
}

long long RandomCostInstance::horizon_cap() const {
  return budget / min_cost_low() + 1;
}

void validate(const RandomCostInstance& instance) {
  if (instance.arms.empty()) {
    throw InvalidInput("instance needs at least one arm");
  }
  if (instance.budget < 0) {
    throw InvalidInput("budget must be nonnegative");
  }
  for (const RandomCostArm& arm : instance.arms) {
    validate(arm.cost);
    validate(arm.model);
    validate(arm.reward_prior);
  }
}

RandomCostState initial_state(const RandomCostInstance& instance) {
  RandomCostState state;
  for (const RandomCostArm& arm : instance.arms) {
    state.reward_beliefs.push_back(arm.reward_prior);
    state.cost_beliefs.push_back(arm.cost.prior);
  }
  state.pull_counts.assign(instance.arms.size(), 0);
  state.remaining_budget = instance.budget;
  return state;
}

double mean_cost(const CostModel& model, const BeliefState& belief) {
  return model.mean_cost(belief.alpha / (belief.alpha + belief.beta));
}

void apply_observation(const RandomCostInstance& instance,
                       RandomCostState& state, int arm, long long reward,
                       long long realized_cost) {
  if (arm < 0 || arm >= instance.num_arms()) {
    throw InvalidInput("apply_observation: arm index out of range");
  }
  const RandomCostArm& spec = instance.arms[static_cast<std::size_t>(arm)];
  if (realized_cost != spec.cost.cost_low &&
      realized_cost != spec.cost.cost_high) {
    throw InvalidInput("apply_observation: cost outside the arm's support");
  }
  state.reward_beliefs[arm] =
      update_belief(state.reward_beliefs[arm], spec.model, reward);
  const RewardModel indicator{1};
  state.cost_beliefs[arm] = update_belief(
      state.cost_beliefs[arm], indicator,
      realized_cost == spec.cost.cost_high ? 1 : 0);
  state.pull_counts[arm] += 1;
  state.remaining_budget -= realized_cost;
}

const char* random_cost_policy_name(RandomCostPolicyKind kind) {
  switch (kind) {
    case RandomCostPolicyKind::kBtsSext: return "bts_sext";
    case RandomCostPolicyKind::kIrsFhSext: return "irs_fh_sext";
    case RandomCostPolicyKind::kIrsVZeroSext: return "irs_vzero_sext";
    case RandomCostPolicyKind::kIrsIndexSext: return "irs_index_sext";
    case RandomCostPolicyKind::kIrsVZeroPext: return "irs_vzero_pext";
    case RandomCostPolicyKind::kIrsVEmaxPext: return "irs_vemax_pext";
    case RandomCostPolicyKind::kIrsIndexPext: return "irs_index_pext";
  }
  return "?";
}

std::optional<RandomCostPolicyKind> parse_random_cost_policy_kind(
    const std::string& name) {
  if (name == "bts_sext") return RandomCostPolicyKind::kBtsSext;
  if (name == "irs_fh_sext") return RandomCostPolicyKind::kIrsFhSext;
  if (name == "irs_vzero_sext") return RandomCostPolicyKind::kIrsVZeroSext;
  if (name == "irs_index_sext") return RandomCostPolicyKind::kIrsIndexSext;
  if (name == "irs_vzero_pext") return RandomCostPolicyKind::kIrsVZeroPext;
  if (name == "irs_vemax_pext") return RandomCostPolicyKind::kIrsVEmaxPext;
  if (name == "irs_index_pext") return RandomCostPolicyKind::kIrsIndexPext;
  return std::nullopt;
}

CostRewardPath sample_cost_reward_path(const RandomCostArm& arm,
                                       const BeliefState& reward_belief,
                                       const BeliefState& cost_belief,
                                       long long budget, PolicyRng& rng) {
  CostRewardPath path;
  path.theta_reward = sample_theta(reward_belief, rng.reward);
  path.theta_cost = sample_theta(cost_belief, rng.cost);
  path.cost_prefix.push_back(0);
  BeliefState reward_post = reward_belief;
  BeliefState cost_post = cost_belief;
  const RewardModel indicator{1};
  path.reward_beliefs.push_back(reward_post);
  path.reward_estimates.push_back(posterior_mean(reward_post, arm.model));
  path.cost_estimates.push_back(mean_cost(arm.cost, cost_post));
  while (true) {
    long long cost = arm.cost.cost_low;
    bool high = false;
    if (arm.cost.cost_high > arm.cost.cost_low) {
      high = rng.cost.uniform() < path.theta_cost;
      if (high) cost = arm.cost.cost_high;
    }
    if (path.cost_prefix.back() + cost > budget) break;
    const long long reward =
        rng.reward.binomial(arm.model.trials, path.theta_reward);
    path.rewards.push_back(reward);
    path.costs.push_back(cost);
    path.cost_prefix.push_back(path.cost_prefix.back() + cost);
    reward_post = update_belief(reward_post, arm.model, reward);
    cost_post = update_belief(cost_post, indicator, high ? 1 : 0);
    path.reward_beliefs.push_back(reward_post);
    path.reward_estimates.push_back(posterior_mean(reward_post, arm.model));
    path.cost_estimates.push_back(mean_cost(arm.cost, cost_post));
  }
  return path;
}

namespace {

Decision stop_if_unaffordable(const RandomCostInstance& instance,
                              const RandomCostState& state, int arm) {
  if (instance.arms[static_cast<std::size_t>(arm)].cost.cost_low >
      state.remaining_budget) {
    return Decision::Stop();
  }
  return Decision::Play(arm);
}

Decision play_largest_count(const RandomCostInstance& instance,
                            const RandomCostState& state,
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
  return stop_if_unaffordable(instance, state, best);
}

// Sampled posterior-mean cost per arm (the effective play price under the
// sampled-cost extension).
std::vector<double> sampled_mean_costs(const RandomCostInstance& instance,
                                       const RandomCostState& state,
                                       RngStream& cost_rng) {
  std::vector<double> costs(instance.arms.size());
  for (std::size_t a = 0; a < costs.size(); ++a) {
    const double theta = sample_theta(state.cost_beliefs[a], cost_rng);
    costs[a] = instance.arms[a].cost.mean_cost(theta);
  }
  return costs;
}

long long real_horizon(long long budget, double unit_cost) {
  if (!(unit_cost > 0.0)) {
    throw InvalidInput("sampled mean cost must be positive");
  }
  const double plays = std::floor(static_cast<double>(budget) / unit_cost);
  return std::max<long long>(0, static_cast<long long>(plays));
}

// --- Real-weight allocation --------------------------------------------
//
// max over counts n of sum_a prefix[a][n_a] subject to
// sum_a n_a * weight[a] <= remaining.  Same recurrence, candidate order and
// tie handling as weighted_allocation_dp, so integer-weight inputs recover
// its result (including the recovered counts) bitwise.

double real_alloc_best(const std::vector<std::vector<double>>& prefix,
                       const std::vector<double>& weights, std::size_t arm,
                       double remaining) {
  if (arm == prefix.size()) return 0.0;
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t n = 0; n < prefix[arm].size(); ++n) {
    const double w = static_cast<double>(n) * weights[arm];
    if (w > remaining) break;
    const double cand =
        prefix[arm][n] + real_alloc_best(prefix, weights, arm + 1, remaining - w);
    if (cand > best) best = cand;
  }
  return best;
}

Allocation real_allocation(const std::vector<std::vector<double>>& prefix,
                           const std::vector<double>& weights,
                           long long budget) {
  double grid = 1.0;
  for (const auto& p : prefix) {
    if (p.empty()) throw InvalidInput("real_allocation: empty prefix");
    grid *= static_cast<double>(p.size());
  }
  if (grid > static_cast<double>(1 << 20)) {
    throw CapacityError("real-weight allocation grid too large");
  }
  Allocation result;
  result.counts.assign(prefix.size(), 0);
  if (budget < 0) return result;
  result.objective =
      real_alloc_best(prefix, weights, 0, static_cast<double>(budget));
  double remaining = static_cast<double>(budget);
  for (std::size_t a = 0; a < prefix.size(); ++a) {
    const double target = real_alloc_best(prefix, weights, a, remaining);
    for (std::size_t n = 0; n < prefix[a].size(); ++n) {
      const double w = static_cast<double>(n) * weights[a];
      if (w > remaining) break;
      if (prefix[a][n] + real_alloc_best(prefix, weights, a + 1, remaining - w) ==
          target) {
        result.counts[a] = static_cast<long long>(n);
        remaining -= w;
        break;
      }
    }
  }
  return result;
}

// --- Sampled-cost extension ----------------------------------------------

Decision sext_bts(const RandomCostInstance& instance,
                  const RandomCostState& state, PolicyRng& rng) {
  const std::vector<double> costs = sampled_mean_costs(instance, state, rng.cost);
  std::vector<double> values(instance.arms.size());
  for (std::size_t a = 0; a < values.size(); ++a) {
    const double theta = sample_theta(state.reward_beliefs[a], rng.reward);
    values[a] = instance.arms[a].model.mean_reward(theta);
  }
  return stop_if_unaffordable(instance, state, ratio_argmax(values, costs));
}

Decision sext_irs_fh(const RandomCostInstance& instance,
                     const RandomCostState& state, PolicyRng& rng) {
  const std::vector<double> costs = sampled_mean_costs(instance, state, rng.cost);
  std::vector<double> estimates(instance.arms.size());
  for (std::size_t a = 0; a < estimates.size(); ++a) {
    const long long plays = real_horizon(state.remaining_budget, costs[a]);
    estimates[a] = sample_estimate_terminal(
        state.reward_beliefs[a], instance.arms[a].model,
        std::max<long long>(0, plays - 1), rng.reward);
  }
  return stop_if_unaffordable(instance, state,
                              ratio_argmax(estimates, costs));
}

Decision sext_irs_vzero(const RandomCostInstance& instance,
                        const RandomCostState& state, PolicyRng& rng) {
  const std::vector<double> costs = sampled_mean_costs(instance, state, rng.cost);
  std::vector<std::vector<double>> prefix(instance.arms.size());
  for (std::size_t a = 0; a < prefix.size(); ++a) {
    const SampledOutcome outcome = sample_outcome(
        state.reward_beliefs[a], instance.arms[a].model,
        real_horizon(state.remaining_budget, costs[a]), rng.reward);
    prefix[a] = outcome.prefix_payoff;
  }
  const Allocation alloc =
      real_allocation(prefix, costs, state.remaining_budget);
  return play_largest_count(instance, state, alloc.counts);
}

Decision sext_irs_index(const RandomCostInstance& instance,
                        const RandomCostState& state,
                        const PolicyConfig& config, PolicyRng& rng) {
  const std::vector<double> costs = sampled_mean_costs(instance, state, rng.cost);
  std::vector<double> index(instance.arms.size());
  for (std::size_t a = 0; a < index.size(); ++a) {
    const RandomCostArm& arm = instance.arms[a];
    const long long horizon = real_horizon(state.remaining_budget, costs[a]);
    const SampledOutcome outcome = sample_outcome(
        state.reward_beliefs[a], arm.model, horizon, rng.reward);
    const std::vector<BeliefState> path =
        belief_path(state.reward_beliefs[a], arm.model, outcome.rewards);
    index[a] = index_bisect(path, outcome.estimate_path, arm.model, horizon,
                            config.bisect_tol, config.bisect_max_iter)
                   .lambda_star;
  }
  return stop_if_unaffordable(instance, state, ratio_argmax(index, costs));
}

// --- Pathwise extension ----------------------------------------------------

std::vector<CostRewardPath> sample_paths(const RandomCostInstance& instance,
                                         const RandomCostState& state,
                                         PolicyRng& rng) {
  std::vector<CostRewardPath> paths;
  paths.reserve(instance.arms.size());
  for (std::size_t a = 0; a < instance.arms.size(); ++a) {
    paths.push_back(sample_cost_reward_path(
        instance.arms[a], state.reward_beliefs[a], state.cost_beliefs[a],
        state.remaining_budget, rng));
  }
  return paths;
}

Decision pext_irs_vzero(const RandomCostInstance& instance,
                        const RandomCostState& state, PolicyRng& rng) {
  const std::vector<CostRewardPath> paths = sample_paths(instance, state, rng);
  double rate = 0.0;
  for (std::size_t a = 0; a < paths.size(); ++a) {
    const RandomCostArm& arm = instance.arms[a];
    rate = std::max(rate, arm.model.mean_reward(paths[a].theta_reward) /
                              arm.cost.mean_cost(paths[a].theta_cost));
  }
  std::vector<std::vector<double>> value_prefix(paths.size());
  std::vector<std::vector<long long>> weight_prefix(paths.size());
  for (std::size_t a = 0; a < paths.size(); ++a) {
    const CostRewardPath& p = paths[a];
    value_prefix[a].push_back(0.0);
    for (long long i = 0; i < p.plays(); ++i) {
      // Reward estimate plus the budget-rate credit for the cost surprise.
      const double item =
          p.reward_estimates[i] +
          rate * (static_cast<double>(p.costs[i]) - p.cost_estimates[i]);
      value_prefix[a].push_back(value_prefix[a].back() + item);
    }
    weight_prefix[a] = p.cost_prefix;
  }
  const Allocation alloc = weighted_allocation_dp(value_prefix, weight_prefix,
                                                  state.remaining_budget);
  return play_largest_count(instance, state, alloc.counts);
}

// E[max_a mean_reward_a / denom_a] over the reward beliefs at one lattice
// point, accumulated exactly like the deterministic-cost lattice so that
// degenerate costs reproduce its quadrature bitwise.
double pext_gamma(const RandomCostInstance& instance,
                  const std::vector<const BeliefState*>& beliefs,
                  const std::vector<double>& denoms, int quad_nodes) {
  std::vector<double> cuts;
  cuts.push_back(0.0);
  for (std::size_t a = 0; a < denoms.size(); ++a) {
    cuts.push_back(instance.arms[a].model.max_reward() / denoms[a]);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  const QuadRule& rule = gauss_legendre(quad_nodes);
  double g = 0.0;
  for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
    const double mid = 0.5 * (cuts[s] + cuts[s + 1]);
    const double half = 0.5 * (cuts[s + 1] - cuts[s]);
    if (!(half > 0.0)) continue;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      const double x = mid + half * rule.nodes[i];
      double prod = 1.0;
      for (std::size_t a = 0; a < denoms.size(); ++a) {
        prod *= beta_cdf(beliefs[a]->alpha, beliefs[a]->beta,
                         x * denoms[a] / instance.arms[a].model.max_reward());
      }
      g += half * rule.weights[i] * (1.0 - prod);
    }
  }
  return g;
}

Decision pext_irs_vemax(const RandomCostInstance& instance,
                        const RandomCostState& state,
                        const PolicyConfig& config, PolicyRng& rng) {
  const std::vector<CostRewardPath> paths = sample_paths(instance, state, rng);
  const std::size_t num_arms = paths.size();
  if (static_cast<int>(num_arms) > config.emax_arm_cap) {
    throw CapacityError("pathwise lattice: arm count exceeds cap");
  }
  std::vector<long long> caps(num_arms);
  std::size_t lattice_size = 1;
  for (std::size_t a = 0; a < num_arms; ++a) {
    caps[a] = paths[a].plays();
    lattice_size *= static_cast<std::size_t>(caps[a]) + 1;
    if (lattice_size > (std::size_t{1} << 22)) {
      throw CapacityError("pathwise lattice too large");
    }
  }
  std::vector<std::size_t> stride(num_arms);
  {
    std::size_t s = 1;
    for (std::size_t a = num_arms; a-- > 0;) {
      stride[a] = s;
      s *= static_cast<std::size_t>(caps[a]) + 1;
    }
  }
  const long long budget = state.remaining_budget;
  const double neg_inf = -std::numeric_limits<double>::infinity();
  std::vector<double> gam(lattice_size, 0.0);
  std::vector<double> value(lattice_size, neg_inf);
  std::vector<int> back(lattice_size, -1);
  std::vector<long long> point(num_arms, 0);
  std::size_t best_index = 0;
  double best_value = 0.0;
  std::vector<const BeliefState*> beliefs(num_arms);
  std::vector<double> denoms(num_arms);
  for (std::size_t flat = 0; flat < lattice_size; ++flat) {
    long long spend = 0;
    for (std::size_t a = 0; a < num_arms; ++a) {
      spend += paths[a].cost_prefix[static_cast<std::size_t>(point[a])];
    }
    if (spend <= budget) {
      for (std::size_t a = 0; a < num_arms; ++a) {
        beliefs[a] = &paths[a].reward_beliefs[static_cast<std::size_t>(point[a])];
        denoms[a] = paths[a].cost_estimates[static_cast<std::size_t>(point[a])];
      }
      gam[flat] = pext_gamma(instance, beliefs, denoms, config.quad_nodes);
      if (flat == 0) {
        value[0] = 0.0;
      } else {
        for (std::size_t a = 0; a < num_arms; ++a) {
          if (point[a] == 0) continue;
          const std::size_t pred = flat - stride[a];
          if (value[pred] == neg_inf) continue;
          const std::size_t n = static_cast<std::size_t>(point[a]) - 1;
          const long long pred_spend =
              spend - paths[a].cost_prefix[n + 1] + paths[a].cost_prefix[n];
          const double slack_pred = static_cast<double>(budget - pred_spend) -
                                    paths[a].cost_estimates[n];
          const double slack_next =
              static_cast<double>(budget - pred_spend) -
              static_cast<double>(paths[a].costs[n]);
          const double payoff = paths[a].reward_estimates[n] +
                                slack_pred * gam[pred] - slack_next * gam[flat];
          const double cand = value[pred] + payoff;
          if (cand > value[flat]) {
            value[flat] = cand;
            back[flat] = static_cast<int>(a);
          }
        }
        if (value[flat] > best_value) {
          best_value = value[flat];
          best_index = flat;
        }
      }
    }
    for (std::size_t a = num_arms; a-- > 0;) {
      if (++point[a] <= caps[a]) break;
      point[a] = 0;
    }
  }
  if (best_index == 0) return Decision::Stop();
  std::size_t cursor = best_index;
  int first = -1;
  while (cursor != 0) {
    first = back[cursor];
    cursor -= stride[static_cast<std::size_t>(first)];
  }
  return stop_if_unaffordable(instance, state, first);
}

// Penalized value of "play this arm n times, then bank the rest of the
// budget at rate lambda", maximized over n; the n = 0 plan is identically
// zero, so sup{lambda : phi > 0} is the break-even budget rate of the arm.
double pext_phi(const CostRewardPath& path, const RewardModel& model,
                long long budget, double lambda) {
  const long long n_max = path.plays();
  std::vector<double> gam(static_cast<std::size_t>(n_max) + 1);
  for (long long i = 0; i <= n_max; ++i) {
    const double d = path.cost_estimates[static_cast<std::size_t>(i)];
    gam[static_cast<std::size_t>(i)] =
        gamma_lambda(path.reward_beliefs[static_cast<std::size_t>(i)], model,
                     lambda * d) /
        d;
  }
  const double b = static_cast<double>(budget);
  double best = 0.0;
  double prefix = 0.0;
  for (long long n = 1; n <= n_max; ++n) {
    const std::size_t i = static_cast<std::size_t>(n);
    prefix += path.reward_estimates[i - 1] -
              path.cost_estimates[i - 1] * gam[i - 1];
    const double spent = static_cast<double>(path.cost_prefix[i]);
    const double value =
        b * (gam[0] - lambda) + (b - spent) * (lambda - gam[i]) + prefix;
    if (value > best) best = value;
  }
  return best;
}

Decision pext_irs_index(const RandomCostInstance& instance,
                        const RandomCostState& state,
                        const PolicyConfig& config, PolicyRng& rng) {
  const std::vector<CostRewardPath> paths = sample_paths(instance, state, rng);
  std::vector<double> index(paths.size(), 0.0);
  for (std::size_t a = 0; a < paths.size(); ++a) {
    const RandomCostArm& arm = instance.arms[a];
    const CostRewardPath& path = paths[a];
    if (path.plays() == 0) {
      index[a] = path.reward_estimates[0] / path.cost_estimates[0];
      continue;
    }
    if (!(pext_phi(path, arm.model, state.remaining_budget, 0.0) > 0.0)) {
      index[a] = 0.0;
      continue;
    }
    double lo = 0.0;
    double hi = arm.model.max_reward() / static_cast<double>(arm.cost.cost_low);
    int iter = 0;
    while (iter < config.bisect_max_iter && hi - lo > config.bisect_tol) {
      const double mid = 0.5 * (lo + hi);
      if (pext_phi(path, arm.model, state.remaining_budget, mid) > 0.0) {
        lo = mid;
      } else {
        hi = mid;
      }
      ++iter;
    }
    index[a] = 0.5 * (lo + hi);
  }
  int best = 0;
  for (std::size_t a = 1; a < index.size(); ++a) {
    if (index[a] > index[best]) best = static_cast<int>(a);
  }
  return stop_if_unaffordable(instance, state, best);
}

}  // namespace

Decision random_cost_step(RandomCostPolicyKind kind,
                          const PolicyConfig& config,
                          const RandomCostInstance& instance,
                          const RandomCostState& state, PolicyRng& rng) {
  if (state.remaining_budget < instance.min_cost_low()) {
    return Decision::Stop();
  }
  switch (kind) {
    case RandomCostPolicyKind::kBtsSext:
      return sext_bts(instance, state, rng);
    case RandomCostPolicyKind::kIrsFhSext:
      return sext_irs_fh(instance, state, rng);
    case RandomCostPolicyKind::kIrsVZeroSext:
      return sext_irs_vzero(instance, state, rng);
    case RandomCostPolicyKind::kIrsIndexSext:
      return sext_irs_index(instance, state, config, rng);
    case RandomCostPolicyKind::kIrsVZeroPext:
      return pext_irs_vzero(instance, state, rng);
    case RandomCostPolicyKind::kIrsVEmaxPext:
      return pext_irs_vemax(instance, state, config, rng);
    case RandomCostPolicyKind::kIrsIndexPext:
      return pext_irs_index(instance, state, config, rng);
  }
  throw InvalidInput("random_cost_step: unknown kind");
}

MeanSe estimate_w_bts_random(const RandomCostInstance& instance,
                             long long samples, RngStream& rng) {
  validate(instance);
  if (samples < 2) {
    throw InvalidInput("bound estimation needs at least two samples");
  }
  double mean = 0.0;
  double m2 = 0.0;
  for (long long i = 0; i < samples; ++i) {
    double best = 0.0;
    for (const RandomCostArm& arm : instance.arms) {
      const double theta_r = sample_theta(arm.reward_prior, rng);
      const double theta_c = sample_theta(arm.cost.prior, rng);
      best = std::max(best, arm.model.mean_reward(theta_r) /
                                arm.cost.mean_cost(theta_c));
    }
    const double draw = static_cast<double>(instance.budget) * best;
    const double delta = draw - mean;
    mean += delta / static_cast<double>(i + 1);
    m2 += delta * (draw - mean);
  }
  MeanSe out;
  out.mean = mean;
  out.se = std::sqrt(m2 / static_cast<double>(samples - 1) /
                     static_cast<double>(samples));
  return out;
}

}  // namespace irs
