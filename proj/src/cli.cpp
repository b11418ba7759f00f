#include "irs/cli.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "irs/bounds.hpp"
#include "irs/common.hpp"
#include "irs/config.hpp"
#include "irs/oracle.hpp"
#include "irs/sim.hpp"

namespace irs {
namespace {

using Json = nlohmann::ordered_json;

struct CommonOpts {
  std::string config_path;
  std::string out;
  std::string format = "csv";
  long long seed = -1;
  long long threads = -1;
  long long episodes = -1;
  long long bound_samples = -1;
  long long fixed_wall_ms = -1;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--config", opts.config_path, "Experiment config (JSON)")
      ->required();
  cmd->add_option("--out", opts.out,
                  "Output file (default: config \"output\", else stdout)");
  cmd->add_option("--format", opts.format, "Output format: csv or json")
      ->capture_default_str();
  cmd->add_option("--seed", opts.seed, "Override base_seed");
  cmd->add_option("--threads", opts.threads, "Override worker thread count");
  cmd->add_option("--episodes", opts.episodes, "Override episodes per policy");
  cmd->add_option("--bound-samples", opts.bound_samples,
                  "Override bound sample count");
  cmd->add_option("--fixed-wall-ms", opts.fixed_wall_ms,
                  "Report this wall_ms instead of measuring (reproducible output)");
}

ExperimentConfig load_with_overrides(const CommonOpts& opts) {
  if (opts.format != "csv" && opts.format != "json") {
    throw InvalidInput("--format must be csv or json");
  }
  ExperimentConfig config = load_config(opts.config_path);
  if (opts.seed >= 0) config.base_seed = static_cast<std::uint64_t>(opts.seed);
  if (opts.threads >= 0) {
    if (opts.threads < 1 || opts.threads > 64) {
      throw InvalidInput("--threads must be in [1, 64]");
    }
    config.threads = static_cast<int>(opts.threads);
  }
  if (opts.episodes >= 0) {
    if (opts.episodes < 2) throw InvalidInput("--episodes must be >= 2");
    config.episodes = opts.episodes;
  }
  if (opts.bound_samples >= 0) {
    if (opts.bound_samples < 2) {
      throw InvalidInput("--bound-samples must be >= 2");
    }
    config.bound_samples = opts.bound_samples;
  }
  if (!opts.out.empty()) config.output = opts.out;
  return config;
}

ExperimentOptions experiment_options(const ExperimentConfig& config,
                                     const CommonOpts& opts) {
  ExperimentOptions options;
  options.episodes = config.episodes;
  options.bound_samples = config.bound_samples;
  options.base_seed = config.base_seed;
  options.threads = config.threads;
  if (opts.fixed_wall_ms >= 0) options.fixed_wall_ms = opts.fixed_wall_ms;
  return options;
}

std::string format_double(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInput("cannot open output file: " + path);
  out << text;
  if (!out) throw InvalidInput("failed writing output file: " + path);
}

// --- simulate / sweep -------------------------------------------------------

std::string render_reports(const std::vector<RegretReport>& reports,
                           const std::string& format) {
  if (format == "json") {
    Json rows = Json::array();
    for (const RegretReport& r : reports) {
      Json row;
      row["policy"] = r.policy;
      row["budget"] = r.budget;
      row["episodes"] = r.episodes;
      row["mean_value"] = r.mean_value;
      row["value_se"] = r.value_se;
      row["w_bts"] = r.w_bts;
      row["regret"] = r.regret;
      row["regret_se"] = r.regret_se;
      row["wall_ms"] = r.wall_ms;
      rows.push_back(std::move(row));
    }
    return rows.dump(2) + "\n";
  }
  std::string text =
      "policy,budget,episodes,mean_value,value_se,w_bts,regret,regret_se,"
      "wall_ms\n";
  for (const RegretReport& r : reports) {
    text += r.policy;
    text += ',' + std::to_string(r.budget);
    text += ',' + std::to_string(r.episodes);
    text += ',' + format_double(r.mean_value);
    text += ',' + format_double(r.value_se);
    text += ',' + format_double(r.w_bts);
    text += ',' + format_double(r.regret);
    text += ',' + format_double(r.regret_se);
    text += ',' + std::to_string(r.wall_ms);
    text += '\n';
  }
  return text;
}

std::vector<RegretReport> run_config_experiments(
    const ExperimentConfig& config, const ExperimentOptions& options,
    const std::vector<long long>& budgets) {
  if (config.policies.empty()) {
    throw InvalidInput("config lists no policies");
  }
  std::vector<RegretReport> reports;
  if (config.random_cost) {
    std::vector<std::pair<RandomCostPolicyKind, PolicyConfig>> policies;
    for (const PolicyEntry& entry : config.policies) {
      policies.emplace_back(*parse_random_cost_policy_kind(entry.name),
                            entry.config);
    }
    RandomCostInstance instance = config.random_instance;
    for (long long budget : budgets) {
      instance.budget = budget;
      for (RegretReport& row :
           run_experiment_random(instance, policies, options)) {
        reports.push_back(std::move(row));
      }
    }
  } else {
    std::vector<std::pair<PolicyKind, PolicyConfig>> policies;
    for (const PolicyEntry& entry : config.policies) {
      policies.emplace_back(*parse_policy_kind(entry.name), entry.config);
    }
    BanditInstance instance = config.instance;
    for (long long budget : budgets) {
      instance.budget = budget;
      for (RegretReport& row : run_experiment(instance, policies, options)) {
        reports.push_back(std::move(row));
      }
    }
  }
  return reports;
}

int cmd_simulate(const CommonOpts& opts, bool sweep) {
  const ExperimentConfig config = load_with_overrides(opts);
  const ExperimentOptions options = experiment_options(config, opts);
  std::vector<long long> budgets;
  if (sweep) {
    if (config.budgets.empty()) {
      throw InvalidInput("sweep needs a \"budgets\" array in the config");
    }
    budgets = config.budgets;
  } else {
    budgets = {config.random_cost ? config.random_instance.budget
                                  : config.instance.budget};
  }
  const std::vector<RegretReport> reports =
      run_config_experiments(config, options, budgets);
  write_output(config.output, render_reports(reports, opts.format));
  return 0;
}

// --- bounds ------------------------------------------------------------

struct BoundRow {
  std::string bound;
  long long budget = 0;
  long long samples = 0;
  double mean = 0.0;
  double se = 0.0;
  double regret_lower_bound = 0.0;
};

std::string render_bounds(const std::vector<BoundRow>& rows,
                          const std::string& format) {
  if (format == "json") {
    Json out = Json::array();
    for (const BoundRow& r : rows) {
      Json row;
      row["bound"] = r.bound;
      row["budget"] = r.budget;
      row["samples"] = r.samples;
      row["mean"] = r.mean;
      row["se"] = r.se;
      row["regret_lower_bound"] = r.regret_lower_bound;
      out.push_back(std::move(row));
    }
    return out.dump(2) + "\n";
  }
  std::string text = "bound,budget,samples,mean,se,regret_lower_bound\n";
  for (const BoundRow& r : rows) {
    text += r.bound;
    text += ',' + std::to_string(r.budget);
    text += ',' + std::to_string(r.samples);
    text += ',' + format_double(r.mean);
    text += ',' + format_double(r.se);
    text += ',' + format_double(r.regret_lower_bound);
    text += '\n';
  }
  return text;
}

RngStream bound_stream(const ExperimentConfig& config, long long budget,
                       std::uint64_t tag) {
  return RngStream(derive_seed({config.base_seed, kBoundDomain, tag,
                                static_cast<std::uint64_t>(budget)}));
}

int cmd_bounds(const CommonOpts& opts) {
  const ExperimentConfig config = load_with_overrides(opts);
  std::vector<long long> budgets = config.budgets;
  if (budgets.empty()) {
    budgets = {config.random_cost ? config.random_instance.budget
                                  : config.instance.budget};
  }
  std::vector<BoundRow> rows;
  if (config.random_cost) {
    // Only the Thompson-sampling bound is defined for random costs.
    RandomCostInstance instance = config.random_instance;
    for (long long budget : budgets) {
      instance.budget = budget;
      RngStream rng = bound_stream(config, budget, 0);
      const MeanSe est =
          estimate_w_bts_random(instance, config.bound_samples, rng);
      rows.push_back(BoundRow{"w_bts", budget, config.bound_samples, est.mean,
                              est.se, 0.0});
    }
  } else {
    std::vector<BoundKind> kinds;
    if (config.bounds.empty()) {
      kinds = {BoundKind::kBts, BoundKind::kIrsFh, BoundKind::kIrsVZero,
               BoundKind::kIrsVEmax};
    } else {
      for (const std::string& name : config.bounds) {
        kinds.push_back(*parse_bound_kind(name));
      }
    }
    BanditInstance instance = config.instance;
    for (long long budget : budgets) {
      instance.budget = budget;
      RngStream bts_rng =
          bound_stream(config, budget, static_cast<std::uint64_t>(BoundKind::kBts));
      const BoundEstimate w_bts = estimate_bound(
          BoundKind::kBts, instance, config.bound_samples, bts_rng);
      std::optional<ValueTable> table;
      for (BoundKind kind : kinds) {
        BoundEstimate est;
        if (kind == BoundKind::kBts) {
          est = w_bts;
        } else {
          BoundConfig bound_config;
          if (kind == BoundKind::kIdeal) {
            if (!table.has_value()) table = ValueTable::build(instance);
            bound_config.value_table = &*table;
          }
          RngStream rng = bound_stream(config, budget,
                                       static_cast<std::uint64_t>(kind));
          est = estimate_bound(kind, instance, config.bound_samples, rng,
                               bound_config);
        }
        rows.push_back(BoundRow{bound_name(kind), budget, est.samples,
                                est.mean, est.se, w_bts.mean - est.mean});
      }
    }
  }
  write_output(config.output, render_bounds(rows, opts.format));
  return 0;
}

// --- oracle ------------------------------------------------------------

int cmd_oracle(const CommonOpts& opts) {
  const ExperimentConfig config = load_with_overrides(opts);
  if (config.random_cost) {
    throw InvalidInput("the oracle command needs deterministic costs");
  }
  const BanditInstance& instance = config.instance;
  std::vector<std::pair<std::string, double>> rows;
  const ValueTable table = ValueTable::build(instance);
  rows.emplace_back("vstar", table.vstar_root());
  rows.emplace_back("w_bts_fractional",
                    exact_bound(ExactBoundKind::kBtsFractional, instance));
  rows.emplace_back("w_irs_fh_fractional",
                    exact_bound(ExactBoundKind::kIrsFh, instance));
  rows.emplace_back("w_irs_vzero",
                    exact_bound(ExactBoundKind::kIrsVZero, instance));
  if (instance.num_arms() <= 2) {
    rows.emplace_back("w_bts_integer",
                      exact_bound(ExactBoundKind::kBtsInteger, instance));
    rows.emplace_back("w_irs_fh_integer",
                      exact_bound(ExactBoundKind::kIrsFhInteger, instance));
  }
  const double tol = 1e-9;
  const bool monotone = rows[1].second >= rows[2].second - tol &&
                        rows[2].second >= rows[3].second - tol &&
                        rows[3].second >= rows[0].second - tol;
  rows.emplace_back("chain_monotone", monotone ? 1.0 : 0.0);

  std::string text;
  if (opts.format == "json") {
    Json out = Json::array();
    for (const auto& [name, value] : rows) {
      Json row;
      row["quantity"] = name;
      row["value"] = value;
      out.push_back(std::move(row));
    }
    text = out.dump(2) + "\n";
  } else {
    text = "quantity,value\n";
    for (const auto& [name, value] : rows) {
      text += name + ',' + format_double(value) + '\n';
    }
  }
  write_output(config.output, text);
  return 0;
}

}  // namespace

int run_cli(int argc, char** argv) {
  CLI::App app{
      "Posterior-sampling policies and information-relaxation bounds for "
      "budgeted bandits"};
  app.require_subcommand(1);
  CommonOpts opts;
  CLI::App* simulate =
      app.add_subcommand("simulate", "Estimate policy values and regret");
  CLI::App* sweep =
      app.add_subcommand("sweep", "simulate across the config's budget grid");
  CLI::App* bounds =
      app.add_subcommand("bounds", "Monte-Carlo performance bound estimates");
  CLI::App* oracle = app.add_subcommand(
      "oracle", "Exact optimal value and bound benchmarks (small instances)");
  for (CLI::App* cmd : {simulate, sweep, bounds, oracle}) {
    add_common(cmd, opts);
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? 0 : 2;
  }
  try {
    if (simulate->parsed()) return cmd_simulate(opts, /*sweep=*/false);
    if (sweep->parsed()) return cmd_simulate(opts, /*sweep=*/true);
    if (bounds->parsed()) return cmd_bounds(opts);
    if (oracle->parsed()) return cmd_oracle(opts);
    return 2;
  } catch (const InvalidInput& err) {
    std::cerr << "error: " << err.what() << '\n';
    return 2;
  } catch (const CapacityError& err) {
    std::cerr << "error: " << err.what() << '\n';
    return 3;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << '\n';
    return 1;
  }
}

}  // namespace irs
