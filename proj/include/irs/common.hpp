#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace irs {

/// Raised when an input violates a documented precondition
/// (bad observation, malformed config, inconsistent sizes, ...).
class InvalidInput : public std::invalid_argument {
 public:
  explicit InvalidInput(const std::string& what) : std::invalid_argument(what) {}
};

/// Raised when a request is well-formed but exceeds a hard capability
/// limit (state-space caps, enumeration caps, unsupported dimension).
class CapacityError : public std::runtime_error {
 public:
  explicit CapacityError(const std::string& what) : std::runtime_error(what) {}
};

/// Beta beliefs with alpha + beta at or above this total are treated as
/// point masses at their mean: draws return the mean exactly and the CDF
/// becomes a step.  (The true Beta sd there is below 1e-9, beneath anything
/// downstream can resolve, and the exact limit keeps zero-variance tests
/// honest.)
inline constexpr double kDegenerateBeliefTotal = 1e18;

/// Compensated (Neumaier) accumulator.  The result depends only on the
/// order in which values are added, which the harness keeps fixed, so
/// aggregates are bitwise reproducible regardless of thread count.
class StableSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace irs
