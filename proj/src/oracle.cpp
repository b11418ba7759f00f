#include "irs/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <utility>

#include "irs/common.hpp"
#include "irs/rng.hpp"
#include "irs/solvers.hpp"
#include "irs/special.hpp"

namespace irs {
namespace {

std::vector<long long> encode_state(long long budget,
                                    const std::vector<Tally>& tallies) {
  std::vector<long long> key;
  key.reserve(1 + 2 * tallies.size());
  key.push_back(budget);
  for (const Tally& t : tallies) {
    key.push_back(t.pulls);
    key.push_back(t.successes);
  }
  return key;
}

BeliefState posterior_at(const ArmSpec& arm, const Tally& tally) {
  return BeliefState{
      arm.prior.alpha + static_cast<double>(tally.successes),
      arm.prior.beta + static_cast<double>(tally.pulls * arm.model.trials -
                                           tally.successes)};
}

// All budget-feasible integer allocations that are not componentwise
// dominated by another feasible allocation.
std::vector<std::vector<long long>> maximal_allocations(
    const BanditInstance& instance, long long path_limit) {
  const int num_arms = instance.num_arms();
  std::vector<long long> caps(num_arms);
  double grid = 1.0;
  for (int a = 0; a < num_arms; ++a) {
    caps[a] = instance.budget / instance.arms[a].cost;
    grid *= static_cast<double>(caps[a] + 1);
  }
  if (grid > static_cast<double>(path_limit)) {
    throw CapacityError("allocation grid exceeds the enumeration limit");
  }
  std::vector<std::vector<long long>> feasible;
  std::vector<long long> counts(num_arms, 0);
  while (true) {
    long long spend = 0;
    for (int a = 0; a < num_arms; ++a) spend += counts[a] * instance.arms[a].cost;
    if (spend <= instance.budget) feasible.push_back(counts);
    int arm = num_arms - 1;
    while (arm >= 0 && counts[arm] == caps[arm]) counts[arm--] = 0;
    if (arm < 0) break;
    ++counts[arm];
  }
  std::vector<std::vector<long long>> maximal;
  for (const auto& n : feasible) {
    bool dominated = false;
    for (const auto& m : feasible) {
      if (&m == &n) continue;
      bool geq = true, strict = false;
      for (int a = 0; a < instance.num_arms(); ++a) {
        if (m[a] < n[a]) geq = false;
        if (m[a] > n[a]) strict = true;
      }
      if (geq && strict) {
        dominated = true;
        break;
      }
    }
    if (!dominated) maximal.push_back(n);
  }
  return maximal;
}

// E[theta ; x0 <= theta <= x1] under Beta(a, b), unnormalised
// (i.e. integral of theta * pdf over the window).
double beta_partial_mean(const BeliefState& belief, double x0, double x1) {
  const double mean = belief.alpha / (belief.alpha + belief.beta);
  return mean * (beta_cdf(belief.alpha + 1.0, belief.beta, x1) -
                 beta_cdf(belief.alpha + 1.0, belief.beta, x0));
}

// E over theta2 of the upper envelope of the lines u_j + v_j * theta2.
double envelope_expectation(std::vector<std::pair<double, double>> lines,
                            const BeliefState& belief) {
  // Keep only the largest intercept per slope, then sweep slopes in
  // increasing order: each new (steeper) line overtakes the hull top at
  // their crossing, retiring any top whose active range that crossing
  // swallows entirely.
  std::sort(lines.begin(), lines.end(),
            [](const auto& l, const auto& r) {
              if (l.second != r.second) return l.second < r.second;
              return l.first < r.first;
            });
  std::vector<std::pair<double, double>> distinct;
  for (const auto& line : lines) {
    if (!distinct.empty() && distinct.back().second == line.second) {
      distinct.back() = line;
    } else {
      distinct.push_back(line);
    }
  }
  std::vector<std::pair<double, double>> hull;
  std::vector<double> starts;  // starts[i] is where hull[i] becomes maximal
  for (const auto& line : distinct) {
    double cross = 0.0;
    while (!hull.empty()) {
      cross = (hull.back().first - line.first) /
              (line.second - hull.back().second);
      if (cross <= starts.back()) {
        hull.pop_back();
        starts.pop_back();
      } else {
        break;
      }
    }
    hull.push_back(line);
    starts.push_back(hull.size() == 1 ? 0.0 : cross);
  }
  StableSum acc;
  for (std::size_t i = 0; i < hull.size(); ++i) {
    const double x1 = i + 1 < hull.size() ? starts[i + 1] : 1.0;
    const double lo = std::clamp(starts[i], 0.0, 1.0);
    const double hi = std::clamp(x1, 0.0, 1.0);
    if (hi <= lo) continue;
    acc.add(hull[i].first *
            (beta_cdf(belief.alpha, belief.beta, hi) -
             beta_cdf(belief.alpha, belief.beta, lo)));
    acc.add(hull[i].second * beta_partial_mean(belief, lo, hi));
  }
  return acc.value();
}

double exact_bts_integer(const BanditInstance& instance, long long path_limit) {
  const auto allocations = maximal_allocations(instance, path_limit);
  if (instance.num_arms() == 1) {
    long long best = 0;
    for (const auto& n : allocations) best = std::max(best, n[0]);
    const ArmSpec& arm = instance.arms[0];
    return static_cast<double>(best) * posterior_mean(arm.prior, arm.model);
  }
  if (instance.num_arms() != 2) {
    throw CapacityError(
        "exact integer benchmark supports at most two arms");
  }
  const ArmSpec& first = instance.arms[0];
  const ArmSpec& second = instance.arms[1];
  // Value of allocation j at (theta1, theta2) is p_j*theta1 + q_j*theta2.
  std::vector<double> ps, qs;
  for (const auto& n : allocations) {
    ps.push_back(static_cast<double>(n[0] * first.model.trials));
    qs.push_back(static_cast<double>(n[1] * second.model.trials));
  }
  // The theta2-envelope changes structure only where a pairwise crossing
  // leaves [0, 1]; those theta1 values cut the outer integral into segments
  // on which the integrand is analytic.
  std::vector<double> cuts{0.0, 1.0};
  for (std::size_t i = 0; i < ps.size(); ++i) {
    for (std::size_t j = i + 1; j < ps.size(); ++j) {
      const double dp = ps[j] - ps[i];
      if (dp == 0.0) continue;
      const double t = (qs[i] - qs[j]) / dp;
      if (t > 0.0 && t < 1.0) cuts.push_back(t);
    }
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  const QuadRule& rule = gauss_legendre(64);
  const double log_norm = log_beta(first.prior.alpha, first.prior.beta);
  StableSum total;
  for (std::size_t seg = 0; seg + 1 < cuts.size(); ++seg) {
    const double mid = 0.5 * (cuts[seg] + cuts[seg + 1]);
    const double half = 0.5 * (cuts[seg + 1] - cuts[seg]);
    if (half <= 0.0) continue;
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
      const double theta1 = mid + half * rule.nodes[k];
      const double log_pdf = (first.prior.alpha - 1.0) * std::log(theta1) +
                             (first.prior.beta - 1.0) * std::log1p(-theta1) -
                             log_norm;
      std::vector<std::pair<double, double>> lines;
      lines.reserve(ps.size());
      for (std::size_t j = 0; j < ps.size(); ++j) {
        lines.emplace_back(ps[j] * theta1, qs[j]);
      }
      const double inner = envelope_expectation(std::move(lines), second.prior);
      total.add(half * rule.weights[k] * std::exp(log_pdf) * inner);
    }
  }
  return total.value();
}

// Per-arm table of terminal posterior-mean estimates under the predictive
// law of the total success count.
struct TerminalTable {
  std::vector<double> estimates;
  std::vector<double> probs;
};

TerminalTable terminal_estimates(const ArmSpec& arm, long long horizon) {
  TerminalTable table;
  if (horizon <= 0) {
    table.estimates.push_back(posterior_mean(arm.prior, arm.model));
    table.probs.push_back(1.0);
    return table;
  }
  const long long total_trials = horizon * arm.model.trials;
  for (long long s = 0; s <= total_trials; ++s) {
    table.probs.push_back(
        beta_binomial_pmf(total_trials, arm.prior.alpha, arm.prior.beta, s));
    const BeliefState post{arm.prior.alpha + static_cast<double>(s),
                           arm.prior.beta +
                               static_cast<double>(total_trials - s)};
    table.estimates.push_back(posterior_mean(post, arm.model));
  }
  return table;
}

double exact_fh(const BanditInstance& instance, bool integer_allocations,
                long long path_limit) {
  const int num_arms = instance.num_arms();
  std::vector<TerminalTable> tables;
  double combos = 1.0;
  for (const ArmSpec& arm : instance.arms) {
    const long long plays = instance.budget / arm.cost;
    tables.push_back(terminal_estimates(arm, std::max<long long>(0, plays - 1)));
    combos *= static_cast<double>(tables.back().probs.size());
  }
  if (combos > static_cast<double>(path_limit)) {
    throw CapacityError("terminal-estimate grid exceeds the enumeration limit");
  }
  std::vector<std::vector<long long>> allocations;
  if (integer_allocations) allocations = maximal_allocations(instance, path_limit);
  std::vector<std::size_t> idx(num_arms, 0);
  StableSum total;
  while (true) {
    double prob = 1.0;
    for (int a = 0; a < num_arms; ++a) prob *= tables[a].probs[idx[a]];
    double value;
    if (integer_allocations) {
      value = 0.0;
      for (const auto& n : allocations) {
        double v = 0.0;
        for (int a = 0; a < num_arms; ++a) {
          v += static_cast<double>(n[a]) * tables[a].estimates[idx[a]];
        }
        value = std::max(value, v);
      }
    } else {
      double best = 0.0;
      for (int a = 0; a < num_arms; ++a) {
        best = std::max(best, tables[a].estimates[idx[a]] /
                                  static_cast<double>(instance.arms[a].cost));
      }
      value = static_cast<double>(instance.budget) * best;
    }
    total.add(prob * value);
    int arm = num_arms - 1;
    while (arm >= 0 && idx[arm] + 1 == tables[arm].probs.size()) idx[arm--] = 0;
    if (arm < 0) break;
    ++idx[arm];
  }
  return total.value();
}

double exact_vzero(const BanditInstance& instance, long long path_limit) {
  const int num_arms = instance.num_arms();
  std::vector<RewardPathTable> tables;
  std::vector<std::vector<std::vector<double>>> prefixes;  // arm, path, n
  std::vector<long long> costs;
  double combos = 1.0;
  for (const ArmSpec& arm : instance.arms) {
    const long long horizon = instance.budget / arm.cost;
    tables.push_back(
        enumerate_reward_paths(arm.prior, arm.model, horizon, path_limit));
    combos *= static_cast<double>(tables.back().paths.size());
    if (combos > static_cast<double>(path_limit)) {
      throw CapacityError("joint reward-path grid exceeds the enumeration limit");
    }
    std::vector<std::vector<double>> arm_prefixes;
    for (const auto& path : tables.back().paths) {
      const std::vector<double> ests = estimate_path(arm.prior, arm.model, path);
      std::vector<double> prefix(path.size() + 1, 0.0);
      for (std::size_t n = 0; n < path.size(); ++n) {
        prefix[n + 1] = prefix[n] + ests[n];
      }
      arm_prefixes.push_back(std::move(prefix));
    }
    prefixes.push_back(std::move(arm_prefixes));
    costs.push_back(arm.cost);
  }
  std::vector<std::size_t> idx(num_arms, 0);
  std::vector<std::vector<double>> chosen(num_arms);
  StableSum total;
  while (true) {
    double prob = 1.0;
    for (int a = 0; a < num_arms; ++a) {
      prob *= tables[a].probs[idx[a]];
      chosen[a] = prefixes[a][idx[a]];
    }
    total.add(prob *
              allocation_dp(chosen, costs, instance.budget).objective);
    int arm = num_arms - 1;
    while (arm >= 0 && idx[arm] + 1 == tables[arm].paths.size()) idx[arm--] = 0;
    if (arm < 0) break;
    ++idx[arm];
  }
  return total.value();
}

}  // namespace

std::size_t StateKeyHash::operator()(
    const std::vector<long long>& key) const {
  std::uint64_t h = 0x9e3779b97f4a7c15ULL;
  for (long long v : key) {
    std::uint64_t x = h ^ static_cast<std::uint64_t>(v);
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    h = x ^ (x >> 31);
  }
  return static_cast<std::size_t>(h);
}

ValueTable ValueTable::build(const BanditInstance& instance,
                             long long state_limit) {
  validate(instance);
  ValueTable table(instance);
  std::vector<Tally> tallies(instance.num_arms());
  table.root_value_ = table.solve(instance.budget, tallies, state_limit);
  return table;
}

double ValueTable::solve(long long budget, std::vector<Tally>& tallies,
                         long long state_limit) {
  const auto key = encode_state(budget, tallies);
  if (const auto it = table_.find(key); it != table_.end()) return it->second;
  if (static_cast<long long>(table_.size()) >= state_limit) {
    throw CapacityError("optimal value table exceeds its state limit");
  }
  double best = 0.0;  // stopping is always available and worth 0
  for (int a = 0; a < instance_.num_arms(); ++a) {
    const ArmSpec& arm = instance_.arms[a];
    if (arm.cost > budget) continue;
    const BeliefState belief = posterior_at(arm, tallies[a]);
    StableSum value;
    for (long long r = 0; r <= arm.model.trials; ++r) {
      const double p =
          beta_binomial_pmf(arm.model.trials, belief.alpha, belief.beta, r);
      if (p <= 0.0) continue;
      tallies[a].pulls += 1;
      tallies[a].successes += r;
      const double cont = solve(budget - arm.cost, tallies, state_limit);
      tallies[a].pulls -= 1;
      tallies[a].successes -= r;
      value.add(p * (static_cast<double>(r) + cont));
    }
    best = std::max(best, value.value());
  }
  table_.emplace(key, best);
  return best;
}

double ValueTable::vstar(long long remaining_budget,
                         const std::vector<Tally>& tallies) const {
  const auto it = table_.find(encode_state(remaining_budget, tallies));
  if (it == table_.end()) {
    throw InvalidInput("value lookup at a state the table never reached");
  }
  return it->second;
}

BeliefState ValueTable::belief_at(int arm, const Tally& tally) const {
  if (arm < 0 || arm >= instance_.num_arms()) {
    throw InvalidInput("arm index out of range");
  }
  return posterior_at(instance_.arms[arm], tally);
}

RewardPathTable enumerate_reward_paths(const BeliefState& belief,
                                       const RewardModel& model,
                                       long long horizon, long long limit) {
  validate(belief);
  validate(model);
  if (horizon < 0) throw InvalidInput("horizon must be nonnegative");
  RewardPathTable table;
  table.paths.push_back({});
  table.probs.push_back(1.0);
  for (long long step = 0; step < horizon; ++step) {
    const double grown = static_cast<double>(table.paths.size()) *
                         static_cast<double>(model.trials + 1);
    if (grown > static_cast<double>(limit)) {
      throw CapacityError("reward-path table exceeds the enumeration limit");
    }
    RewardPathTable next;
    next.paths.reserve(static_cast<std::size_t>(grown));
    next.probs.reserve(static_cast<std::size_t>(grown));
    for (std::size_t i = 0; i < table.paths.size(); ++i) {
      double alpha = belief.alpha;
      double beta = belief.beta;
      for (long long r : table.paths[i]) {
        alpha += static_cast<double>(r);
        beta += static_cast<double>(model.trials - r);
      }
      for (long long r = 0; r <= model.trials; ++r) {
        const double p = beta_binomial_pmf(model.trials, alpha, beta, r);
        std::vector<long long> path = table.paths[i];
        path.push_back(r);
        next.paths.push_back(std::move(path));
        next.probs.push_back(table.probs[i] * p);
      }
    }
    table = std::move(next);
  }
  return table;
}

double exact_bound(ExactBoundKind kind, const BanditInstance& instance,
                   long long path_limit) {
  validate(instance);
  switch (kind) {
    case ExactBoundKind::kBtsFractional: {
      std::vector<BeliefState> beliefs;
      std::vector<RewardModel> models;
      std::vector<double> costs;
      for (const ArmSpec& arm : instance.arms) {
        beliefs.push_back(arm.prior);
        models.push_back(arm.model);
        costs.push_back(static_cast<double>(arm.cost));
      }
      return static_cast<double>(instance.budget) *
             expected_max_ratio(beliefs, models, costs);
    }
    case ExactBoundKind::kBtsInteger:
      return exact_bts_integer(instance, path_limit);
    case ExactBoundKind::kIrsFh:
      return exact_fh(instance, /*integer_allocations=*/false, path_limit);
    case ExactBoundKind::kIrsFhInteger:
      return exact_fh(instance, /*integer_allocations=*/true, path_limit);
    case ExactBoundKind::kIrsVZero:
      return exact_vzero(instance, path_limit);
  }
  throw InvalidInput("unknown exact bound kind");
}

namespace {

// Exhaustive expectation over the decision tree of a policy whose action at
// every reachable state is deterministic.  Returns nullopt if any reachable
// state is genuinely randomized or the tree grows past the limit.
std::optional<double> walk_deterministic(
    PolicyKind kind, const PolicyConfig& config, const BanditInstance& instance,
    long long budget, std::vector<Tally>& tallies,
    std::unordered_map<std::vector<long long>, double, StateKeyHash>&
        memo,
    long long state_limit) {
  const auto key = encode_state(budget, tallies);
  if (const auto it = memo.find(key); it != memo.end()) return it->second;
  if (static_cast<long long>(memo.size()) >= state_limit) return std::nullopt;
  PolicyState state;
  state.remaining_budget = budget;
  for (std::size_t a = 0; a < tallies.size(); ++a) {
    state.beliefs.push_back(posterior_at(instance.arms[a], tallies[a]));
    state.pull_counts.push_back(tallies[a].pulls);
  }
  const std::optional<Decision> decision =
      deterministic_decision(kind, config, instance, state);
  if (!decision.has_value()) return std::nullopt;
  double value = 0.0;
  if (decision->play) {
    const int a = decision->arm;
    const ArmSpec& arm = instance.arms[a];
    StableSum acc;
    for (long long r = 0; r <= arm.model.trials; ++r) {
      const double p = beta_binomial_pmf(
          arm.model.trials, state.beliefs[a].alpha, state.beliefs[a].beta, r);
      if (p <= 0.0) continue;
      tallies[a].pulls += 1;
      tallies[a].successes += r;
      const auto cont = walk_deterministic(kind, config, instance,
                                           budget - arm.cost, tallies, memo,
                                           state_limit);
      tallies[a].pulls -= 1;
      tallies[a].successes -= r;
      if (!cont.has_value()) return std::nullopt;
      acc.add(p * (static_cast<double>(r) + *cont));
    }
    value = acc.value();
  }
  memo.emplace(key, value);
  return value;
}

}  // namespace

PolicyValue exact_policy_value(PolicyKind kind, const PolicyConfig& config,
                               const BanditInstance& instance,
                               long long mc_episodes, std::uint64_t seed) {
  validate(instance);
  if (instance.num_arms() == 1) {
    // Every policy plays the lone arm while it is affordable, and each play
    // returns the prior mean in expectation (the estimate is a martingale).
    const ArmSpec& arm = instance.arms[0];
    PolicyValue result;
    result.value = static_cast<double>(instance.budget / arm.cost) *
                   posterior_mean(arm.prior, arm.model);
    result.exact = true;
    return result;
  }
  std::unordered_map<std::vector<long long>, double, StateKeyHash> memo;
  std::vector<Tally> tallies(instance.num_arms());
  const auto exact =
      walk_deterministic(kind, config, instance, instance.budget, tallies,
                         memo, /*state_limit=*/1000000);
  if (exact.has_value()) {
    PolicyValue result;
    result.value = *exact;
    result.exact = true;
    return result;
  }
  if (mc_episodes < 2) {
    throw InvalidInput("Monte-Carlo fallback needs at least two episodes");
  }
  // Welford-style streaming moments over independent seeded episodes.
  double mean = 0.0;
  double m2 = 0.0;
  const auto kind_tag = static_cast<std::uint64_t>(kind);
  for (long long ep = 0; ep < mc_episodes; ++ep) {
    RngStream env(derive_seed({seed, kEnvDomain, kind_tag,
                               static_cast<std::uint64_t>(ep)}));
    RngStream pol(derive_seed({seed, kPolicyDomain, kind_tag,
                               static_cast<std::uint64_t>(ep)}));
    std::vector<double> thetas;
    for (const ArmSpec& arm : instance.arms) {
      thetas.push_back(sample_theta(arm.prior, env));
    }
    PolicyState state = initial_state(instance);
    double total = 0.0;
    const long long cap = instance.horizon_cap();
    for (long long t = 0; t < cap; ++t) {
      const Decision d = policy_step(kind, config, instance, state, pol);
      if (!d.play) break;
      const long long reward =
          env.binomial(instance.arms[d.arm].model.trials, thetas[d.arm]);
      total += static_cast<double>(reward);
      apply_observation(instance, state, d.arm, reward);
    }
    const double delta = total - mean;
    mean += delta / static_cast<double>(ep + 1);
    m2 += delta * (total - mean);
  }
  PolicyValue result;
  result.value = mean;
  result.se = std::sqrt(m2 / static_cast<double>(mc_episodes - 1) /
                        static_cast<double>(mc_episodes));
  result.exact = false;
  result.episodes = mc_episodes;
  return result;
}

}  // namespace irs
