#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "irs/bayes.hpp"
#include "irs/policies.hpp"
#include "irs/random_cost.hpp"

namespace irs {

struct PolicyEntry {
  std::string name;
  PolicyConfig config;
};

/// A fully validated experiment description.  Exactly one of the two
/// instance members is active, selected by `random_cost`: an arm given as
/// a plain integer "cost" keeps costs deterministic, an arm given with a
/// "cost_model" makes the whole instance a random-cost one (plain-cost arms
/// are then carried as degenerate cost models).
struct ExperimentConfig {
  bool random_cost = false;
  BanditInstance instance;
  RandomCostInstance random_instance;

  std::vector<long long> budgets;  // sweep grid; empty = single budget
  std::vector<PolicyEntry> policies;
  std::vector<std::string> bounds;  // bound names for the bounds command

  long long episodes = 10000;
  long long bound_samples = 100000;
  std::uint64_t base_seed = 1;
  int threads = 1;
  std::string output;  // empty = stdout
};

/// Parses and validates a JSON experiment config.  Validation is strict:
/// unknown keys anywhere, a missing schema_version, or out-of-range values
/// all raise InvalidInput with a message naming the offending key.
ExperimentConfig parse_config(const std::string& json_text);

/// parse_config on the contents of a file.
ExperimentConfig load_config(const std::string& path);

/// Canonical JSON form; parse_config(serialize_config(c)) reproduces c.
std::string serialize_config(const ExperimentConfig& config);

}  // namespace irs
