#include "irs/rng.hpp"

#include "irs/common.hpp"

namespace irs {

namespace {

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t derive_seed(std::initializer_list<std::uint64_t> words) {
  std::uint64_t h = 0x5851f42d4c957f2dULL;
  for (std::uint64_t w : words) {
    h = splitmix64(h ^ w);
  }
  return h;
}

double RngStream::beta(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) {
    throw InvalidInput("RngStream::beta: shape parameters must be positive");
  }
  if (a + b >= kDegenerateBeliefTotal) {
    return a / (a + b);
  }
  std::gamma_distribution<double> ga(a, 1.0);
  std::gamma_distribution<double> gb(b, 1.0);
  const double x = ga(engine_);
  const double y = gb(engine_);
  if (x + y <= 0.0) return a / (a + b);  // underflow guard for tiny shapes
  return x / (x + y);
}

long long RngStream::binomial(long long n, double p) {
  if (n < 0) throw InvalidInput("RngStream::binomial: negative trial count");
  if (n == 0) return 0;
  if (p <= 0.0) return 0;
  if (p >= 1.0) return n;
  std::binomial_distribution<long long> dist(n, p);
  return dist(engine_);
}

}  // namespace irs
