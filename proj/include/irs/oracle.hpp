#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "irs/policies.hpp"

namespace irs {

/// Integer sufficient statistic of one arm's posterior: number of plays and
/// total successes, anchored at the arm's (real-valued) root prior.
struct Tally {
  long long pulls = 0;
  long long successes = 0;
  bool operator==(const Tally&) const = default;
};

/// Hash for (budget, tallies) keys encoded as flat integer vectors.
struct StateKeyHash {
  std::size_t operator()(const std::vector<long long>& key) const;
};

/// Exact optimal value function V*(budget, beliefs) computed by backward
/// induction over the reachable integer belief states.  Intended for desk
/// -scale instances; construction throws CapacityError past state_limit.
class ValueTable {
 public:
  static ValueTable build(const BanditInstance& instance,
                          long long state_limit = 1000000);

  /// V* at the root (full budget, prior beliefs).
  double vstar_root() const { return root_value_; }

  /// V* at any reachable state.  Throws InvalidInput for unreachable keys.
  double vstar(long long remaining_budget,
               const std::vector<Tally>& tallies) const;

  long long state_count() const { return static_cast<long long>(table_.size()); }
  const BanditInstance& instance() const { return instance_; }

  /// Belief of one arm at a tally.
  BeliefState belief_at(int arm, const Tally& tally) const;

 private:
  explicit ValueTable(const BanditInstance& instance) : instance_(instance) {}

  double solve(long long budget, std::vector<Tally>& tallies,
               long long state_limit);

  BanditInstance instance_;
  std::unordered_map<std::vector<long long>, double, StateKeyHash> table_;
  double root_value_ = 0.0;
};

/// Prior-predictive law of one arm's reward sequence: every path of length
/// `horizon` together with its probability.  Throws CapacityError when the
/// path count exceeds `limit`.
struct RewardPathTable {
  std::vector<std::vector<long long>> paths;
  std::vector<double> probs;
};
RewardPathTable enumerate_reward_paths(const BeliefState& belief,
                                       const RewardModel& model,
                                       long long horizon, long long limit);

enum class ExactBoundKind {
  kBtsFractional,  // B * E[max_a mean_a(theta)/c_a]
  kBtsInteger,     // E[max over integer allocations of sum mean_a(theta)*n_a]
  kIrsFh,          // B * E[max_a muhat_{a,floor(B/c)-1}/c_a]
  kIrsFhInteger,   // integer-allocation variant of the above
  kIrsVZero        // E[max over integer allocations of sum_a S_a(n_a)]
};

/// Closed-form / exhaustive-enumeration values of the information-relaxation
/// bounds, exact up to quadrature at ~1e-12.  The integer BTS benchmark
/// supports K <= 2 (piecewise-exact bivariate integration); the enumerated
/// kinds respect `path_limit` on the joint reward-path count.
double exact_bound(ExactBoundKind kind, const BanditInstance& instance,
                   long long path_limit = 1000000);

struct PolicyValue {
  double value = 0.0;
  double se = 0.0;
  bool exact = false;
  long long episodes = 0;  // Monte-Carlo fallback sample count (0 if exact)
};

/// V(policy) — exact when the policy's decision at every reachable state is
/// a deterministic function of the state (single arm, or myopic states all
/// the way down); otherwise a seeded Monte-Carlo estimate with its SE.
PolicyValue exact_policy_value(PolicyKind kind, const PolicyConfig& config,
                               const BanditInstance& instance,
                               long long mc_episodes = 200000,
                               std::uint64_t seed = 20260814ULL);

}  // namespace irs
