#pragma once

#include <vector>

#include "irs/bayes.hpp"

namespace irs {

/// Index of the arm maximizing values[a] / costs[a]; smallest index wins
/// exact ties.  Costs must be positive (they may be real-valued: the
/// random-cost extension divides by sampled mean costs).
int ratio_argmax(const std::vector<double>& values,
                 const std::vector<double>& costs);

struct Allocation {
  std::vector<long long> counts;
  double objective = 0.0;
};

/// Budgeted assortment optimizer:
///   max over n   sum_a value_prefix[a][n_a]
///   subject to   sum_a weight_prefix[a][n_a] <= budget
/// where plays of an arm must be taken in order (prefix structure) and
/// weight_prefix[a] is a nondecreasing integer sequence starting at 0.
/// Ties prefer the lexicographically smallest count vector.
/// budget < 0 yields the all-zero allocation.
Allocation weighted_allocation_dp(
    const std::vector<std::vector<double>>& value_prefix,
    const std::vector<std::vector<long long>>& weight_prefix,
    long long budget);

/// Constant-cost special case: playing arm a exactly n times weighs n*costs[a].
Allocation allocation_dp(const std::vector<std::vector<double>>& value_prefix,
                         const std::vector<long long>& costs, long long budget);

/// E[max_a mean_reward_a(theta_a) / unit_costs[a]] for independent Beta
/// beliefs.  Exactly posterior_mean / cost for one arm; otherwise the
/// survival-function identity, integrated with double-exponential panels
/// split at the per-arm support ends (the Beta CDF's endpoint exponents can
/// dip below one, where fixed-order polynomial rules stall near 1e-6).
double expected_max_ratio(const std::vector<BeliefState>& beliefs,
                          const std::vector<RewardModel>& models,
                          const std::vector<double>& unit_costs);

/// Gamma^lambda = E[max(mean_reward(theta), lambda)] under a Beta belief.
/// Closed form via the regularized incomplete beta function.
double gamma_lambda(const BeliefState& belief, const RewardModel& model,
                    double lambda);

/// Single-arm index machinery.  `path` is the belief path y_0..y_T and
/// `estimates` the posterior-mean path muhat_0..muhat_T induced by one
/// sampled outcome; horizon_T = floor(budget / cost) is the number of plays
/// the budget allows.
///
/// phi(lambda) is the relative benefit of playing the arm at all versus
/// spending the whole budget on a deterministic outside option of rate
/// lambda; the never-play plan contributes exactly 0, so phi >= 0 and the
/// index is the largest lambda at which phi is still strictly positive.
double index_phi(const std::vector<BeliefState>& path,
                 const std::vector<double>& estimates, const RewardModel& model,
                 long long horizon_T, double lambda);

struct IndexResult {
  double lambda_star = 0.0;
  int iterations = 0;
  bool converged = false;
  bool degenerate = false;  // phi(0+) not positive; arm never worth playing
};

/// Bisection for lambda* = sup{lambda : phi(lambda) > 0} on [0, max_reward].
/// horizon_T == 0 (arm unaffordable) returns the posterior mean, the
/// continuous extension of the T == 1 case.
IndexResult index_bisect(const std::vector<BeliefState>& path,
                         const std::vector<double>& estimates,
                         const RewardModel& model, long long horizon_T,
                         double tol = 1e-6, int max_iter = 60);

struct LatticeResult {
  bool play = false;
  int first_action = -1;
  std::vector<long long> counts;  // argmax lattice point
  double objective = 0.0;         // penalized value at the argmax
};

/// Lattice DP for the expected-max penalty: enumerates all feasible pull
///-count vectors n (sum_a n_a * costs[a] <= budget), propagates the
/// penalized value M, and backtracks the maximizing play sequence.  Returns
/// the argmax point and the first action of the backtracked sequence; the
/// all-zero point means "do not play".  Cost grows as O(K * prod_a T_a), so
/// the arm count is capped (CapacityError beyond arm_cap).
LatticeResult emax_lattice_dp(const std::vector<SampledOutcome>& outcomes,
                              const std::vector<BeliefState>& current_beliefs,
                              const std::vector<RewardModel>& models,
                              const std::vector<long long>& costs,
                              long long budget, int quad_nodes = 64,
                              int arm_cap = 3);

}  // namespace irs
