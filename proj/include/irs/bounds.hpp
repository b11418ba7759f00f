#pragma once

#include <optional>
#include <string>

#include "irs/oracle.hpp"
#include "irs/rng.hpp"

namespace irs {

enum class BoundKind { kBts, kIrsFh, kIrsVZero, kIrsVEmax, kIdeal };

const char* bound_name(BoundKind kind);
std::optional<BoundKind> parse_bound_kind(const std::string& name);

struct BoundEstimate {
  BoundKind kind = BoundKind::kBts;
  long long samples = 0;
  double mean = 0.0;
  double se = 0.0;
};

struct BoundConfig {
  int quad_nodes = 64;
  int emax_arm_cap = 3;
  long long path_limit = 1000000;
  /// Optimal value table for the same instance; required by kIdeal only.
  const ValueTable* value_table = nullptr;
};

/// Monte-Carlo estimate of a performance bound: the mean over independent
/// posterior draws of the corresponding clairvoyant inner problem, with the
/// standard error of that mean.  Requires samples >= 2.
BoundEstimate estimate_bound(BoundKind kind, const BanditInstance& instance,
                             long long samples, RngStream& rng,
                             const BoundConfig& config = {});

}  // namespace irs
