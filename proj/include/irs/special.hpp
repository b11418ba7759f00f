#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace irs {

/// log of the Beta function B(a, b), a, b > 0.
double log_beta(double a, double b);

/// Regularized incomplete beta function I_x(a, b) for a, b > 0, x in [0, 1].
/// Continued-fraction evaluation (modified Lentz), absolute accuracy ~1e-14.
double reg_inc_beta(double a, double b, double x);

/// CDF of Beta(a, b) at x (clamped outside [0, 1]).
double beta_cdf(double a, double b, double x);

/// P[S = s] for S ~ BetaBinomial(n, a, b): the prior-predictive law of the
/// number of successes in n exchangeable Bernoulli trials under Beta(a, b).
double beta_binomial_pmf(long long n, double a, double b, long long s);

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1].
/// Results are cached per n; thread-safe.
struct QuadRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
const QuadRule& gauss_legendre(int n);

/// Integrates f over [lo, hi] with one n-point Gauss-Legendre panel.
template <typename F>
double gl_integrate(F&& f, double lo, double hi, int n) {
  const QuadRule& rule = gauss_legendre(n);
  const double mid = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  double acc = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    acc += rule.weights[i] * f(mid + half * rule.nodes[i]);
  }
  return acc * half;
}

/// Integrates a bounded f over [lo, hi] with tanh-sinh (double-exponential)
/// quadrature, halving the step until successive levels agree.  Converges
/// exponentially even when f has algebraic endpoint behavior (e.g. x^p with
/// p < 1), where polynomial rules stall.  f may be evaluated at the
/// endpoints themselves, so it must be finite there.
template <typename F>
double de_integrate(F&& f, double lo, double hi) {
  if (!(hi > lo)) return 0.0;
  const double mid = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  constexpr double kPiHalf = 1.5707963267948966;
  // Past |t| = 3.6 the weights are below 1e-23; nothing survives rounding.
  constexpr double kTMax = 3.6;
  auto weighted = [&](double t) {
    const double u = kPiHalf * std::sinh(t);
    const double c = std::cosh(u);
    const double w = kPiHalf * std::cosh(t) / (c * c);
    return w * f(mid + half * std::tanh(u));
  };
  double h = 1.0;
  double sum = weighted(0.0);
  for (int j = 1; j * h <= kTMax; ++j) {
    sum += weighted(j * h) + weighted(-j * h);
  }
  double value = sum * h * half;
  for (int level = 1; level <= 9; ++level) {
    h *= 0.5;
    for (int j = 1; j * h <= kTMax; j += 2) {
      sum += weighted(j * h) + weighted(-j * h);
    }
    const double next = sum * h * half;
    if (level >= 4 && std::abs(next - value) <= 5e-14 * (1.0 + std::abs(next))) {
      return next;
    }
    value = next;
  }
  return value;
}

}  // namespace irs
