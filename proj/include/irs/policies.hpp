#pragma once

#include <optional>
#include <string>
#include <vector>

#include "irs/bayes.hpp"
#include "irs/solvers.hpp"

namespace irs {

/// A policy either plays an arm it can afford or stops the episode.
struct Decision {
  bool play = false;
  int arm = -1;

  static Decision Stop() { return {}; }
  static Decision Play(int a) { return Decision{true, a}; }
  bool operator==(const Decision&) const = default;
};

enum class PolicyKind { kBts, kIrsFh, kIrsVZero, kIrsVEmax, kIrsIndex };

const char* policy_name(PolicyKind kind);
std::optional<PolicyKind> parse_policy_kind(const std::string& name);

struct PolicyConfig {
  int quad_nodes = 64;      // Gauss-Legendre order for expected-max integrals
  double bisect_tol = 1e-6;  // index bisection bracket width
  int bisect_max_iter = 60;
  int emax_arm_cap = 3;  // lattice DP refuses more arms than this
};

/// Mutable per-episode state owned by the harness; policies are pure
/// functions of (instance, state, stream).
struct PolicyState {
  std::vector<BeliefState> beliefs;
  std::vector<long long> pull_counts;
  long long remaining_budget = 0;
};

PolicyState initial_state(const BanditInstance& instance);

/// Applies one observed transition: belief update, pull count, budget.
void apply_observation(const BanditInstance& instance, PolicyState& state,
                       int arm, long long reward);

// One-step decision rules.  Sampling order is fixed (arm 0 first), so runs
// are reproducible for a given stream.  All five stop when the arm they
// select is unaffordable, even if some other arm is still affordable
// (the termination rule is part of the algorithm, not an optimization).
Decision bts_step(const BanditInstance& instance, const PolicyState& state,
                  RngStream& rng);
Decision irs_fh_step(const BanditInstance& instance, const PolicyState& state,
                     RngStream& rng);
Decision irs_vzero_step(const BanditInstance& instance,
                        const PolicyState& state, RngStream& rng);
Decision irs_vemax_step(const BanditInstance& instance,
                        const PolicyState& state, RngStream& rng,
                        const PolicyConfig& config = {});
Decision irs_index_step(const BanditInstance& instance,
                        const PolicyState& state, RngStream& rng,
                        const PolicyConfig& config = {});

Decision policy_step(PolicyKind kind, const PolicyConfig& config,
                     const BanditInstance& instance, const PolicyState& state,
                     RngStream& rng);

// Deterministic cores: the decision given already-sampled inputs.  The
// *_step functions draw the inputs and delegate here; tests drive these
// directly with fixed outcomes.
Decision bts_decide(const BanditInstance& instance, const PolicyState& state,
                    const std::vector<double>& sampled_theta);
Decision irs_fh_decide(const BanditInstance& instance, const PolicyState& state,
                       const std::vector<double>& terminal_estimates);
Decision irs_vzero_decide(const BanditInstance& instance,
                          const PolicyState& state,
                          const std::vector<SampledOutcome>& outcomes);
Decision irs_vemax_decide(const BanditInstance& instance,
                          const PolicyState& state,
                          const std::vector<SampledOutcome>& outcomes,
                          const PolicyConfig& config = {});
Decision irs_index_decide(const BanditInstance& instance,
                          const PolicyState& state,
                          const std::vector<SampledOutcome>& outcomes,
                          const PolicyConfig& config = {});

/// The decision at `state` when it does not depend on the sampled future
/// (e.g. every arm's sampling horizon is zero, or K == 1); nullopt when the
/// decision is genuinely randomized.  Used by the exact policy evaluator.
std::optional<Decision> deterministic_decision(PolicyKind kind,
                                               const PolicyConfig& config,
                                               const BanditInstance& instance,
                                               const PolicyState& state);

}  // namespace irs
