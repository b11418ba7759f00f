#include "irs/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "irs/common.hpp"
#include "irs/special.hpp"

namespace irs {

int ratio_argmax(const std::vector<double>& values,
                 const std::vector<double>& costs) {
  if (values.empty() || values.size() != costs.size()) {
    throw InvalidInput("ratio_argmax: values/costs size mismatch");
  }
  int best = 0;
  double best_ratio = -std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < values.size(); ++a) {
    if (!(costs[a] > 0.0)) {
      throw InvalidInput("ratio_argmax: costs must be positive");
    }
    const double ratio = values[a] / costs[a];
    if (ratio > best_ratio) {
      best_ratio = ratio;
      best = static_cast<int>(a);
    }
  }
  return best;
}

Allocation weighted_allocation_dp(
    const std::vector<std::vector<double>>& value_prefix,
    const std::vector<std::vector<long long>>& weight_prefix, long long budget) {
  const std::size_t num_arms = value_prefix.size();
  if (num_arms == 0 || weight_prefix.size() != num_arms) {
    throw InvalidInput("weighted_allocation_dp: prefix table size mismatch");
  }
  for (std::size_t a = 0; a < num_arms; ++a) {
    if (value_prefix[a].empty() ||
        value_prefix[a].size() != weight_prefix[a].size()) {
      throw InvalidInput("weighted_allocation_dp: ragged prefix tables");
    }
    if (weight_prefix[a][0] != 0) {
      throw InvalidInput("weighted_allocation_dp: weight prefix must start at 0");
    }
    for (std::size_t n = 1; n < weight_prefix[a].size(); ++n) {
      if (weight_prefix[a][n] < weight_prefix[a][n - 1]) {
        throw InvalidInput("weighted_allocation_dp: weights must be nondecreasing");
      }
    }
  }

  Allocation result;
  result.counts.assign(num_arms, 0);
  if (budget < 0) return result;

  // Suffix table: best[a][b] = optimum using arms a.. with budget b.
  const std::size_t width = static_cast<std::size_t>(budget) + 1;
  std::vector<std::vector<double>> best(num_arms + 1,
                                        std::vector<double>(width, 0.0));
  for (std::size_t a = num_arms; a-- > 0;) {
    for (std::size_t b = 0; b < width; ++b) {
      double v = -std::numeric_limits<double>::infinity();
      for (std::size_t n = 0; n < weight_prefix[a].size(); ++n) {
        const long long w = weight_prefix[a][n];
        if (w > static_cast<long long>(b)) break;
        const double cand =
            value_prefix[a][n] + best[a + 1][b - static_cast<std::size_t>(w)];
        if (cand > v) v = cand;
      }
      best[a][b] = v;
    }
  }

  // Forward recovery keeps the lexicographically smallest maximizing counts:
  // the candidate expressions are recomputed exactly as during the fill, so
  // the first n reproducing best[a][b] bitwise is well defined.
  long long remaining = budget;
  for (std::size_t a = 0; a < num_arms; ++a) {
    const std::size_t b = static_cast<std::size_t>(remaining);
    for (std::size_t n = 0; n < weight_prefix[a].size(); ++n) {
      const long long w = weight_prefix[a][n];
      if (w > remaining) break;
      const double cand =
          value_prefix[a][n] + best[a + 1][b - static_cast<std::size_t>(w)];
      if (cand == best[a][b]) {
        result.counts[a] = static_cast<long long>(n);
        remaining -= w;
        break;
      }
    }
  }
  result.objective = best[0][static_cast<std::size_t>(budget)];
  return result;
}

Allocation allocation_dp(const std::vector<std::vector<double>>& value_prefix,
                         const std::vector<long long>& costs, long long budget) {
  if (costs.size() != value_prefix.size()) {
    throw InvalidInput("allocation_dp: costs/prefix size mismatch");
  }
  std::vector<std::vector<long long>> weights(value_prefix.size());
  for (std::size_t a = 0; a < value_prefix.size(); ++a) {
    if (costs[a] < 1) throw InvalidInput("allocation_dp: costs must be >= 1");
    weights[a].resize(value_prefix[a].size());
    for (std::size_t n = 0; n < weights[a].size(); ++n) {
      weights[a][n] = static_cast<long long>(n) * costs[a];
    }
  }
  return weighted_allocation_dp(value_prefix, weights, budget);
}

double expected_max_ratio(const std::vector<BeliefState>& beliefs,
                          const std::vector<RewardModel>& models,
                          const std::vector<double>& unit_costs) {
  const std::size_t num_arms = beliefs.size();
  if (num_arms == 0 || models.size() != num_arms ||
      unit_costs.size() != num_arms) {
    throw InvalidInput("expected_max_ratio: input size mismatch");
  }
  // Per-arm support end of mean_reward(theta) / cost.
  std::vector<double> support_end(num_arms);
  for (std::size_t a = 0; a < num_arms; ++a) {
    if (!(unit_costs[a] > 0.0)) {
      throw InvalidInput("expected_max_ratio: costs must be positive");
    }
    support_end[a] = models[a].max_reward() / unit_costs[a];
  }
  // One arm: the max is the arm itself, so the answer is its mean.
  if (num_arms == 1) {
    return posterior_mean(beliefs[0], models[0]) / unit_costs[0];
  }
  // Split at the support ends, where the integrand loses smoothness.  Each
  // Beta CDF also behaves like t^alpha / (1-t)^beta at its own endpoints,
  // which defeats polynomial rules when the exponent is below one, so the
  // panels use the double-exponential rule.
  std::vector<double> cuts = support_end;
  cuts.push_back(0.0);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  auto survival = [&](double x) {
    double prod = 1.0;
    for (std::size_t a = 0; a < num_arms; ++a) {
      prod *= beta_cdf(beliefs[a].alpha, beliefs[a].beta,
                       x * unit_costs[a] / models[a].max_reward());
      if (prod == 0.0) break;
    }
    return 1.0 - prod;
  };

  double total = 0.0;
  for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
    if (cuts[s + 1] > cuts[s]) {
      total += de_integrate(survival, cuts[s], cuts[s + 1]);
    }
  }
  return total;
}

double gamma_lambda(const BeliefState& belief, const RewardModel& model,
                    double lambda) {
  const double mean = posterior_mean(belief, model);
  const double m = model.max_reward();
  const double t = lambda / m;
  if (t <= 0.0) return mean;
  if (t >= 1.0) return lambda;
  if (belief.alpha + belief.beta >= kDegenerateBeliefTotal) {
    return std::max(mean, lambda);
  }
  // E[max(m*theta, lambda)] = lambda*F_{a,b}(t) + m*mean_theta*(1 - F_{a+1,b}(t))
  // with F_{a+1,b}(t) obtained from F_{a,b}(t) by the forward recurrence.
  const double a = belief.alpha;
  const double b = belief.beta;
  const double f_ab = reg_inc_beta(a, b, t);
  const double bump =
      std::exp(a * std::log(t) + b * std::log1p(-t) - std::log(a) - log_beta(a, b));
  const double f_a1b = std::min(1.0, std::max(0.0, f_ab - bump));
  return lambda * f_ab + mean * (1.0 - f_a1b);
}

double index_phi(const std::vector<BeliefState>& path,
                 const std::vector<double>& estimates, const RewardModel& model,
                 long long horizon_T, double lambda) {
  if (horizon_T < 0) throw InvalidInput("index_phi: negative horizon");
  const std::size_t T = static_cast<std::size_t>(horizon_T);
  if (path.size() < T + 1 || estimates.size() < T + 1) {
    throw InvalidInput("index_phi: outcome shorter than the horizon");
  }
  if (T == 0) return 0.0;

  std::vector<double> gam(T + 1);
  for (std::size_t i = 0; i <= T; ++i) {
    gam[i] = gamma_lambda(path[i], model, lambda);
  }
  // The n = 0 plan (never play the arm) is exactly 0 by construction; the
  // n >= 1 plans are evaluated with a running min and prefix sum.
  double best = 0.0;
  double running_min = gam[0];
  double prefix = 0.0;
  const double horizon = static_cast<double>(horizon_T);
  for (std::size_t n = 1; n <= T; ++n) {
    prefix += estimates[n - 1] - gam[n - 1];
    running_min = std::min(running_min, gam[n]);
    const double value = horizon * (gam[0] - lambda) +
                         (horizon - static_cast<double>(n)) * (lambda - running_min) +
                         prefix;
    if (value > best) best = value;
  }
  return best;
}

IndexResult index_bisect(const std::vector<BeliefState>& path,
                         const std::vector<double>& estimates,
                         const RewardModel& model, long long horizon_T,
                         double tol, int max_iter) {
  if (!(tol > 0.0)) throw InvalidInput("index_bisect: tol must be positive");
  IndexResult result;
  if (horizon_T == 0) {
    // No play fits the budget; the index degenerates to the myopic value
    // (the T -> 1 limit, where lambda* equals the posterior mean).
    if (estimates.empty()) throw InvalidInput("index_bisect: empty estimates");
    result.lambda_star = estimates[0];
    result.converged = true;
    return result;
  }
  if (!(index_phi(path, estimates, model, horizon_T, 0.0) > 0.0)) {
    result.degenerate = true;
    result.converged = true;
    return result;
  }
  double lo = 0.0;
  double hi = model.max_reward();
  int iter = 0;
  while (iter < max_iter && hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (index_phi(path, estimates, model, horizon_T, mid) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
    ++iter;
  }
  result.lambda_star = 0.5 * (lo + hi);
  result.iterations = iter;
  result.converged = (hi - lo) <= tol;
  return result;
}

LatticeResult emax_lattice_dp(const std::vector<SampledOutcome>& outcomes,
                              const std::vector<BeliefState>& current_beliefs,
                              const std::vector<RewardModel>& models,
                              const std::vector<long long>& costs,
                              long long budget, int quad_nodes, int arm_cap) {
  const std::size_t num_arms = outcomes.size();
  if (num_arms == 0 || current_beliefs.size() != num_arms ||
      models.size() != num_arms || costs.size() != num_arms) {
    throw InvalidInput("emax_lattice_dp: input size mismatch");
  }
  if (static_cast<int>(num_arms) > arm_cap) {
    throw CapacityError("emax_lattice_dp: arm count " +
                        std::to_string(num_arms) + " exceeds cap " +
                        std::to_string(arm_cap));
  }

  LatticeResult result;
  result.counts.assign(num_arms, 0);
  if (budget < 0) return result;

  std::vector<long long> horizon(num_arms);
  std::size_t lattice_size = 1;
  for (std::size_t a = 0; a < num_arms; ++a) {
    if (costs[a] < 1) throw InvalidInput("emax_lattice_dp: costs must be >= 1");
    horizon[a] = budget / costs[a];
    if (outcomes[a].horizon() < horizon[a]) {
      throw InvalidInput("emax_lattice_dp: outcome shorter than floor(B/c)");
    }
    lattice_size *= static_cast<std::size_t>(horizon[a]) + 1;
    if (lattice_size > (std::size_t{1} << 22)) {
      throw CapacityError("emax_lattice_dp: lattice too large");
    }
  }

  // Belief paths induced by the sampled rewards, truncated to the horizon.
  std::vector<std::vector<BeliefState>> paths(num_arms);
  for (std::size_t a = 0; a < num_arms; ++a) {
    std::vector<long long> rewards(outcomes[a].rewards.begin(),
                                   outcomes[a].rewards.begin() + horizon[a]);
    paths[a] = belief_path(current_beliefs[a], models[a], rewards);
  }

  // Quadrature panels for E[max_a mean_a/c_a]: fixed across lattice points,
  // so the per-(arm, count) Beta CDF values at every node can be cached.
  std::vector<double> cuts;
  cuts.push_back(0.0);
  for (std::size_t a = 0; a < num_arms; ++a) {
    cuts.push_back(models[a].max_reward() / static_cast<double>(costs[a]));
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  const QuadRule& rule = gauss_legendre(quad_nodes);
  std::vector<double> xs, ws;
  for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
    const double mid = 0.5 * (cuts[s] + cuts[s + 1]);
    const double half = 0.5 * (cuts[s + 1] - cuts[s]);
    if (!(half > 0.0)) continue;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      xs.push_back(mid + half * rule.nodes[i]);
      ws.push_back(half * rule.weights[i]);
    }
  }
  const std::size_t num_nodes = xs.size();

  // cdf[a][n][node] = F_a at node under the belief after n sampled rewards.
  std::vector<std::vector<std::vector<double>>> cdf(num_arms);
  for (std::size_t a = 0; a < num_arms; ++a) {
    cdf[a].resize(horizon[a] + 1, std::vector<double>(num_nodes));
    for (long long n = 0; n <= horizon[a]; ++n) {
      const BeliefState& y = paths[a][n];
      for (std::size_t i = 0; i < num_nodes; ++i) {
        cdf[a][n][i] = beta_cdf(
            y.alpha, y.beta,
            xs[i] * static_cast<double>(costs[a]) / models[a].max_reward());
      }
    }
  }

  std::vector<std::size_t> stride(num_arms);
  {
    std::size_t s = 1;
    for (std::size_t a = num_arms; a-- > 0;) {
      stride[a] = s;
      s *= static_cast<std::size_t>(horizon[a]) + 1;
    }
  }

  const double neg_inf = -std::numeric_limits<double>::infinity();
  std::vector<double> gam(lattice_size, 0.0);
  std::vector<double> value(lattice_size, neg_inf);
  std::vector<int> back(lattice_size, -1);

  std::vector<long long> point(num_arms, 0);
  std::size_t best_index = 0;
  double best_value = 0.0;

  for (std::size_t flat = 0; flat < lattice_size; ++flat) {
    long long spend = 0;
    for (std::size_t a = 0; a < num_arms; ++a) spend += point[a] * costs[a];
    if (spend <= budget) {
      double g = 0.0;
      for (std::size_t i = 0; i < num_nodes; ++i) {
        double prod = 1.0;
        for (std::size_t a = 0; a < num_arms; ++a) {
          prod *= cdf[a][point[a]][i];
        }
        g += ws[i] * (1.0 - prod);
      }
      gam[flat] = g;

      if (flat == 0) {
        value[0] = 0.0;
      } else {
        for (std::size_t a = 0; a < num_arms; ++a) {
          if (point[a] == 0) continue;
          const std::size_t pred = flat - stride[a];
          if (value[pred] == neg_inf) continue;
          const double slack = static_cast<double>(budget - spend);
          const double payoff = outcomes[a].estimate_path[point[a] - 1] +
                                slack * gam[pred] - slack * gam[flat];
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
    // Odometer increment (last arm fastest).
    for (std::size_t a = num_arms; a-- > 0;) {
      if (++point[a] <= horizon[a]) break;
      point[a] = 0;
    }
  }

  result.objective = best_value;
  if (best_index == 0) return result;  // origin: do not play

  // Decode the argmax point and backtrack the play sequence.
  {
    std::size_t rest = best_index;
    for (std::size_t a = 0; a < num_arms; ++a) {
      result.counts[a] = static_cast<long long>(rest / stride[a]);
      rest %= stride[a];
    }
  }
  std::size_t cursor = best_index;
  int first = -1;
  while (cursor != 0) {
    first = back[cursor];
    cursor -= stride[static_cast<std::size_t>(first)];
  }
  result.play = true;
  result.first_action = first;
  return result;
}

}  // namespace irs
