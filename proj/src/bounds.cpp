#include "irs/bounds.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "irs/common.hpp"
#include "irs/solvers.hpp"
#include "irs/special.hpp"

namespace irs {
namespace {

double sample_bts(const BanditInstance& instance, RngStream& rng) {
  double best = 0.0;
  for (const ArmSpec& arm : instance.arms) {
    const double theta = sample_theta(arm.prior, rng);
    best = std::max(best, arm.model.mean_reward(theta) /
                              static_cast<double>(arm.cost));
  }
  return static_cast<double>(instance.budget) * best;
}

double sample_fh(const BanditInstance& instance, RngStream& rng) {
  double best = 0.0;
  for (const ArmSpec& arm : instance.arms) {
    const long long plays = instance.budget / arm.cost;
    const double estimate = sample_estimate_terminal(
        arm.prior, arm.model, std::max<long long>(0, plays - 1), rng);
    best = std::max(best, estimate / static_cast<double>(arm.cost));
  }
  return static_cast<double>(instance.budget) * best;
}

std::vector<SampledOutcome> draw_outcomes(const BanditInstance& instance,
                                          RngStream& rng) {
  std::vector<SampledOutcome> outcomes;
  outcomes.reserve(instance.arms.size());
  for (const ArmSpec& arm : instance.arms) {
    outcomes.push_back(sample_outcome(arm.prior, arm.model,
                                      instance.budget / arm.cost, rng));
  }
  return outcomes;
}

double sample_vzero(const BanditInstance& instance, RngStream& rng) {
  const auto outcomes = draw_outcomes(instance, rng);
  std::vector<std::vector<double>> prefixes;
  std::vector<long long> costs;
  for (std::size_t a = 0; a < outcomes.size(); ++a) {
    prefixes.push_back(outcomes[a].prefix_payoff);
    costs.push_back(instance.arms[a].cost);
  }
  return allocation_dp(prefixes, costs, instance.budget).objective;
}

double sample_vemax(const BanditInstance& instance, RngStream& rng,
                    const BoundConfig& config) {
  const auto outcomes = draw_outcomes(instance, rng);
  std::vector<BeliefState> beliefs;
  std::vector<RewardModel> models;
  std::vector<long long> costs;
  for (const ArmSpec& arm : instance.arms) {
    beliefs.push_back(arm.prior);
    models.push_back(arm.model);
    costs.push_back(arm.cost);
  }
  return emax_lattice_dp(outcomes, beliefs, models, costs, instance.budget,
                         config.quad_nodes, config.emax_arm_cap)
      .objective;
}

// Inner problem whose penalty hands the decision maker the optimal value
// function itself: along any outcome the maximised objective telescopes to
// V*, so every sample coincides and the estimator has zero variance.
double sample_ideal(const BanditInstance& instance, RngStream& rng,
                    const ValueTable& table) {
  const auto outcomes = draw_outcomes(instance, rng);
  const int num_arms = instance.num_arms();
  std::vector<long long> caps(num_arms), strides(num_arms);
  long long lattice = 1;
  for (int a = num_arms - 1; a >= 0; --a) {
    caps[a] = instance.budget / instance.arms[a].cost;
    strides[a] = lattice;
    lattice *= caps[a] + 1;
    if (lattice > (1LL << 22)) {
      throw CapacityError("outcome lattice exceeds the enumeration limit");
    }
  }
  // Reward prefix sums give the tally at any lattice point directly.
  std::vector<std::vector<long long>> reward_prefix(num_arms);
  for (int a = 0; a < num_arms; ++a) {
    reward_prefix[a].assign(1, 0);
    for (long long r : outcomes[a].rewards) {
      reward_prefix[a].push_back(reward_prefix[a].back() + r);
    }
  }
  const double invalid = -std::numeric_limits<double>::infinity();
  std::vector<double> value(static_cast<std::size_t>(lattice), invalid);
  value[0] = 0.0;
  double best = 0.0;
  std::vector<long long> counts(num_arms, 0);
  std::vector<Tally> tallies(num_arms);
  for (long long flat = 1; flat < lattice; ++flat) {
    int arm = num_arms - 1;
    while (counts[arm] == caps[arm]) counts[arm--] = 0;
    ++counts[arm];
    long long spend = 0;
    for (int a = 0; a < num_arms; ++a) spend += counts[a] * instance.arms[a].cost;
    if (spend > instance.budget) continue;
    const long long after = instance.budget - spend;
    double point = invalid;
    for (int a = 0; a < num_arms; ++a) {
      if (counts[a] == 0) continue;
      const double from = value[static_cast<std::size_t>(flat - strides[a])];
      if (from == invalid) continue;
      for (int b = 0; b < num_arms; ++b) {
        tallies[b].pulls = counts[b];
        tallies[b].successes = reward_prefix[b][static_cast<std::size_t>(counts[b])];
      }
      tallies[a].pulls -= 1;
      tallies[a].successes -=
          outcomes[a].rewards[static_cast<std::size_t>(counts[a] - 1)];
      const BeliefState post = table.belief_at(a, tallies[a]);
      const long long trials = instance.arms[a].model.trials;
      double expected_next = 0.0;
      for (long long r = 0; r <= trials; ++r) {
        const double p = beta_binomial_pmf(trials, post.alpha, post.beta, r);
        if (p <= 0.0) continue;
        tallies[a].pulls += 1;
        tallies[a].successes += r;
        expected_next += p * table.vstar(after, tallies);
        tallies[a].pulls -= 1;
        tallies[a].successes -= r;
      }
      tallies[a].pulls += 1;
      tallies[a].successes +=
          outcomes[a].rewards[static_cast<std::size_t>(counts[a] - 1)];
      const double realized_next = table.vstar(after, tallies);
      const double payoff =
          outcomes[a].estimate_path[static_cast<std::size_t>(counts[a] - 1)] +
          expected_next - realized_next;
      point = std::max(point, from + payoff);
    }
    value[static_cast<std::size_t>(flat)] = point;
    if (point != invalid) best = std::max(best, point);
  }
  return best;
}

}  // namespace

const char* bound_name(BoundKind kind) {
  switch (kind) {
    case BoundKind::kBts:
      return "w_bts";
    case BoundKind::kIrsFh:
      return "w_irs_fh";
    case BoundKind::kIrsVZero:
      return "w_irs_vzero";
    case BoundKind::kIrsVEmax:
      return "w_irs_vemax";
    case BoundKind::kIdeal:
      return "w_ideal";
  }
  return "unknown";
}

std::optional<BoundKind> parse_bound_kind(const std::string& name) {
  if (name == "w_bts") return BoundKind::kBts;
  if (name == "w_irs_fh") return BoundKind::kIrsFh;
  if (name == "w_irs_vzero") return BoundKind::kIrsVZero;
  if (name == "w_irs_vemax") return BoundKind::kIrsVEmax;
  if (name == "w_ideal") return BoundKind::kIdeal;
  return std::nullopt;
}

BoundEstimate estimate_bound(BoundKind kind, const BanditInstance& instance,
                             long long samples, RngStream& rng,
                             const BoundConfig& config) {
  validate(instance);
  if (samples < 2) {
    throw InvalidInput("bound estimation needs at least two samples");
  }
  if (kind == BoundKind::kIdeal && config.value_table == nullptr) {
    throw InvalidInput("the ideal bound needs an optimal value table");
  }
  double mean = 0.0;
  double m2 = 0.0;
  for (long long i = 0; i < samples; ++i) {
    double draw = 0.0;
    switch (kind) {
      case BoundKind::kBts:
        draw = sample_bts(instance, rng);
        break;
      case BoundKind::kIrsFh:
        draw = sample_fh(instance, rng);
        break;
      case BoundKind::kIrsVZero:
        draw = sample_vzero(instance, rng);
        break;
      case BoundKind::kIrsVEmax:
        draw = sample_vemax(instance, rng, config);
        break;
      case BoundKind::kIdeal:
        draw = sample_ideal(instance, rng, *config.value_table);
        break;
    }
    const double delta = draw - mean;
    mean += delta / static_cast<double>(i + 1);
    m2 += delta * (draw - mean);
  }
  BoundEstimate estimate;
  estimate.kind = kind;
  estimate.samples = samples;
  estimate.mean = mean;
  estimate.se = std::sqrt(m2 / static_cast<double>(samples - 1) /
                          static_cast<double>(samples));
  return estimate;
}

}  // namespace irs
