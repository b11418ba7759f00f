#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

#include "irs/common.hpp"

namespace irs {

/// Mixes an arbitrary sequence of 64-bit words into one seed (splitmix64
/// finalizer per word).  Used to derive independent named substreams, e.g.
/// derive_seed({base, kEnvDomain, policy_id, episode}).
std::uint64_t derive_seed(std::initializer_list<std::uint64_t> words);

/// Fixed domain tags that keep environment / policy / bound draws on
/// non-overlapping streams for a given base seed.
inline constexpr std::uint64_t kEnvDomain = 0x656e766972ULL;      // "envir"
inline constexpr std::uint64_t kPolicyDomain = 0x706f6c6963ULL;   // "polic"
inline constexpr std::uint64_t kBoundDomain = 0x626f756e64ULL;    // "bound"
inline constexpr std::uint64_t kCostDomain = 0x636f7374ULL;       // "cost"

/// Seedable random stream.  Every stochastic operation in the library takes
/// one of these explicitly; nothing draws from hidden global state.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : engine_(seed) {}

  /// U(0, 1).
  double uniform() { return unit_(engine_); }

  /// Beta(a, b) via a pair of gamma draws.  Beliefs with a + b >= 1e18 are
  /// treated as degenerate and return the mean exactly (the Beta(inf) limit;
  /// the true sd there is below 1e-9 and indistinguishable downstream).
  double beta(double a, double b);

  /// Binomial(n, p) count.
  long long binomial(long long n, double p);

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::uniform_real_distribution<double> unit_{0.0, 1.0};
};

}  // namespace irs
