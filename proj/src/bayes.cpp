#include "irs/bayes.hpp"

#include <algorithm>

#include "irs/common.hpp"

namespace irs {

long long BanditInstance::horizon_cap() const {
  long long cap = 0;
  for (const ArmSpec& arm : arms) {
    cap = std::max(cap, budget / arm.cost + 1);
  }
  return cap;
}

void validate(const BeliefState& belief) {
  if (!(belief.alpha > 0.0) || !(belief.beta > 0.0)) {
    throw InvalidInput("BeliefState: alpha and beta must be positive");
  }
}

void validate(const RewardModel& model) {
  if (model.trials < 1) {
    throw InvalidInput("RewardModel: trials must be >= 1");
  }
}

void validate(const BanditInstance& instance) {
  if (instance.arms.empty()) {
    throw InvalidInput("BanditInstance: need at least one arm");
  }
  if (instance.budget < 0) {
    throw InvalidInput("BanditInstance: budget must be >= 0");
  }
  for (const ArmSpec& arm : instance.arms) {
    if (arm.cost < 1) {
      throw InvalidInput("BanditInstance: arm costs must be >= 1");
    }
    validate(arm.model);
    validate(arm.prior);
  }
}

BeliefState update_belief(const BeliefState& belief, const RewardModel& model,
                          long long reward) {
  if (reward < 0 || reward > model.trials) {
    throw InvalidInput("update_belief: reward outside {0..trials}");
  }
  return BeliefState{belief.alpha + static_cast<double>(reward),
                     belief.beta + static_cast<double>(model.trials - reward)};
}

double posterior_mean(const BeliefState& belief, const RewardModel& model) {
  return static_cast<double>(model.trials) * belief.alpha /
         (belief.alpha + belief.beta);
}

double sample_theta(const BeliefState& belief, RngStream& rng) {
  return rng.beta(belief.alpha, belief.beta);
}

std::vector<double> estimate_path(const BeliefState& belief,
                                  const RewardModel& model,
                                  const std::vector<long long>& rewards) {
  const double m = static_cast<double>(model.trials);
  std::vector<double> path(rewards.size() + 1);
  double cum = 0.0;
  for (std::size_t i = 0; i <= rewards.size(); ++i) {
    path[i] = m * (belief.alpha + cum) /
              (belief.alpha + belief.beta + static_cast<double>(i) * m);
    if (i < rewards.size()) cum += static_cast<double>(rewards[i]);
  }
  return path;
}

std::vector<BeliefState> belief_path(const BeliefState& belief,
                                     const RewardModel& model,
                                     const std::vector<long long>& rewards) {
  std::vector<BeliefState> path;
  path.reserve(rewards.size() + 1);
  path.push_back(belief);
  for (long long r : rewards) {
    path.push_back(update_belief(path.back(), model, r));
  }
  return path;
}

SampledOutcome sample_outcome(const BeliefState& belief,
                              const RewardModel& model, long long horizon,
                              RngStream& rng) {
  if (horizon < 0) throw InvalidInput("sample_outcome: negative horizon");
  SampledOutcome out;
  out.theta = sample_theta(belief, rng);
  out.rewards.resize(horizon);
  for (long long i = 0; i < horizon; ++i) {
    out.rewards[i] = rng.binomial(model.trials, out.theta);
  }
  out.estimate_path = estimate_path(belief, model, out.rewards);
  out.prefix_payoff.resize(out.estimate_path.size());
  out.prefix_payoff[0] = 0.0;
  for (std::size_t i = 1; i < out.estimate_path.size(); ++i) {
    out.prefix_payoff[i] = out.prefix_payoff[i - 1] + out.estimate_path[i - 1];
  }
  return out;
}

double sample_estimate_terminal(const BeliefState& belief,
                                const RewardModel& model, long long horizon,
                                RngStream& rng) {
  if (horizon < 0) {
    throw InvalidInput("sample_estimate_terminal: negative horizon");
  }
  const double theta = sample_theta(belief, rng);
  const long long total = rng.binomial(horizon * model.trials, theta);
  const double m = static_cast<double>(model.trials);
  return m * (belief.alpha + static_cast<double>(total)) /
         (belief.alpha + belief.beta + static_cast<double>(horizon) * m);
}

}  // namespace irs
