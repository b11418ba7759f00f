#pragma once

#include <vector>

#include "irs/rng.hpp"

namespace irs {

/// Observation model of one arm: reward per play is Bernoulli(theta) or
/// Binomial(trials, theta).  Bernoulli is the trials == 1 case.
struct RewardModel {
  long long trials = 1;  // >= 1

  double max_reward() const { return static_cast<double>(trials); }
  double mean_reward(double theta) const {
    return static_cast<double>(trials) * theta;
  }
};

/// Conjugate Beta(alpha, beta) belief over an arm's success rate theta.
struct BeliefState {
  double alpha = 1.0;  // > 0
  double beta = 1.0;   // > 0
};

struct ArmSpec {
  long long cost = 1;  // integer budget units per play, >= 1
  RewardModel model;
  BeliefState prior;
};

struct BanditInstance {
  std::vector<ArmSpec> arms;
  long long budget = 0;  // >= 0

  int num_arms() const { return static_cast<int>(arms.size()); }
  /// Hard cap on the number of decision epochs of any episode.
  long long horizon_cap() const;
};

/// One simulated future for a single arm: a parameter draw, a reward path,
/// and the induced posterior-mean path.
///   estimate_path[i] = posterior mean after the first i rewards (i = 0..n)
///   prefix_payoff[i] = sum_{j<i} estimate_path[j]  (the i-play payoff S_i)
struct SampledOutcome {
  double theta = 0.0;
  std::vector<long long> rewards;
  std::vector<double> estimate_path;
  std::vector<double> prefix_payoff;

  long long horizon() const {
    return static_cast<long long>(rewards.size());
  }
};

void validate(const BeliefState& belief);
void validate(const RewardModel& model);
void validate(const BanditInstance& instance);

/// Conjugate update for one observed reward r in {0, ..., trials}:
/// (alpha, beta) -> (alpha + r, beta + trials - r).
BeliefState update_belief(const BeliefState& belief, const RewardModel& model,
                          long long reward);

/// Predictive mean reward of the next play: trials * alpha / (alpha + beta).
double posterior_mean(const BeliefState& belief, const RewardModel& model);

/// Draws theta ~ Beta(alpha, beta) (exact mean for degenerate beliefs).
double sample_theta(const BeliefState& belief, RngStream& rng);

/// Posterior-mean path induced by a fixed reward sequence.
std::vector<double> estimate_path(const BeliefState& belief,
                                  const RewardModel& model,
                                  const std::vector<long long>& rewards);

/// Belief path y_0..y_n induced by a fixed reward sequence.
std::vector<BeliefState> belief_path(const BeliefState& belief,
                                     const RewardModel& model,
                                     const std::vector<long long>& rewards);

/// Simulates one future of length `horizon` for an arm: draws theta from the
/// belief, then `horizon` rewards from the model at that theta.
SampledOutcome sample_outcome(const BeliefState& belief,
                              const RewardModel& model, long long horizon,
                              RngStream& rng);

/// Draws only the terminal estimate muhat_n, using a single Binomial
/// (horizon * trials) draw for the reward sum.  Identical in law to
/// sample_outcome(...).estimate_path[horizon].
double sample_estimate_terminal(const BeliefState& belief,
                                const RewardModel& model, long long horizon,
                                RngStream& rng);

}  // namespace irs
