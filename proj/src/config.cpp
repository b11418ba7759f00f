#include "irs/config.hpp"

#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>

#include <json.hpp>

#include "irs/bounds.hpp"
#include "irs/common.hpp"

namespace irs {
namespace {

using Json = nlohmann::ordered_json;

void check_keys(const Json& obj, std::initializer_list<const char*> allowed,
                const std::string& where) {
  if (!obj.is_object()) {
    throw InvalidInput(where + " must be a JSON object");
  }
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const char* key : allowed) {
      if (item.key() == key) {
        known = true;
        break;
      }
    }
    if (!known) {
      throw InvalidInput("unknown key \"" + item.key() + "\" in " + where);
    }
  }
}

const Json& require(const Json& obj, const char* key,
                    const std::string& where) {
  const auto it = obj.find(key);
  if (it == obj.end()) {
    throw InvalidInput(where + " is missing required key \"" + key + "\"");
  }
  return *it;
}

long long as_int(const Json& value, const std::string& what) {
  if (!value.is_number_integer() && !value.is_number_unsigned()) {
    throw InvalidInput(what + " must be an integer");
  }
  return value.get<long long>();
}

double as_double(const Json& value, const std::string& what) {
  if (!value.is_number()) {
    throw InvalidInput(what + " must be a number");
  }
  return value.get<double>();
}

std::string as_string(const Json& value, const std::string& what) {
  if (!value.is_string()) {
    throw InvalidInput(what + " must be a string");
  }
  return value.get<std::string>();
}

BeliefState parse_prior(const Json& obj, const std::string& where) {
  BeliefState prior;
  if (const auto it = obj.find("alpha"); it != obj.end()) {
    prior.alpha = as_double(*it, where + ".alpha");
  }
  if (const auto it = obj.find("beta"); it != obj.end()) {
    prior.beta = as_double(*it, where + ".beta");
  }
  return prior;
}

struct ParsedArm {
  bool random = false;
  ArmSpec det;
  RandomCostArm rc;
};

ParsedArm parse_arm(const Json& obj, const std::string& where) {
  check_keys(obj, {"cost", "cost_model", "trials", "alpha", "beta"}, where);
  const bool has_cost = obj.contains("cost");
  const bool has_model = obj.contains("cost_model");
  if (has_cost == has_model) {
    throw InvalidInput(where + " needs exactly one of \"cost\"/\"cost_model\"");
  }
  ParsedArm arm;
  RewardModel model;
  if (const auto it = obj.find("trials"); it != obj.end()) {
    model.trials = as_int(*it, where + ".trials");
  }
  const BeliefState prior = parse_prior(obj, where);
  if (has_cost) {
    arm.det.cost = as_int(obj["cost"], where + ".cost");
    arm.det.model = model;
    arm.det.prior = prior;
  } else {
    const Json& cm = obj["cost_model"];
    const std::string cm_where = where + ".cost_model";
    check_keys(cm, {"cost_low", "cost_high", "alpha", "beta"}, cm_where);
    arm.random = true;
    arm.rc.cost.cost_low = as_int(require(cm, "cost_low", cm_where),
                                  cm_where + ".cost_low");
    arm.rc.cost.cost_high = as_int(require(cm, "cost_high", cm_where),
                                   cm_where + ".cost_high");
    arm.rc.cost.prior = parse_prior(cm, cm_where);
    arm.rc.model = model;
    arm.rc.reward_prior = prior;
  }
  return arm;
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text) {
  Json doc;
  try {
    doc = Json::parse(json_text);
  } catch (const Json::parse_error& err) {
    throw InvalidInput(std::string("config is not valid JSON: ") + err.what());
  }
  check_keys(doc,
             {"schema_version", "instance", "budgets", "policies", "bounds",
              "episodes", "bound_samples", "base_seed", "threads", "output"},
             "config");
  if (as_int(require(doc, "schema_version", "config"),
             "config.schema_version") != 1) {
    throw InvalidInput("config.schema_version must be 1");
  }

  ExperimentConfig config;

  const Json& inst = require(doc, "instance", "config");
  check_keys(inst, {"budget", "arms"}, "config.instance");
  const long long budget =
      as_int(require(inst, "budget", "config.instance"),
             "config.instance.budget");
  const Json& arms = require(inst, "arms", "config.instance");
  if (!arms.is_array() || arms.empty()) {
    throw InvalidInput("config.instance.arms must be a nonempty array");
  }
  std::vector<ParsedArm> parsed;
  for (std::size_t a = 0; a < arms.size(); ++a) {
    parsed.push_back(
        parse_arm(arms[a], "config.instance.arms[" + std::to_string(a) + "]"));
    if (parsed.back().random) config.random_cost = true;
  }
  if (config.random_cost) {
    config.random_instance.budget = budget;
    for (const ParsedArm& arm : parsed) {
      if (arm.random) {
        config.random_instance.arms.push_back(arm.rc);
      } else {
        // Plain-cost arm inside a random-cost instance: carried as a
        // degenerate two-point cost.
        RandomCostArm rc;
        rc.cost.cost_low = arm.det.cost;
        rc.cost.cost_high = arm.det.cost;
        rc.model = arm.det.model;
        rc.reward_prior = arm.det.prior;
        config.random_instance.arms.push_back(rc);
      }
    }
    validate(config.random_instance);
  } else {
    config.instance.budget = budget;
    for (const ParsedArm& arm : parsed) config.instance.arms.push_back(arm.det);
    validate(config.instance);
  }

  if (const auto it = doc.find("budgets"); it != doc.end()) {
    if (!it->is_array() || it->empty()) {
      throw InvalidInput("config.budgets must be a nonempty array");
    }
    for (std::size_t i = 0; i < it->size(); ++i) {
      const long long b =
          as_int((*it)[i], "config.budgets[" + std::to_string(i) + "]");
      if (b < 0) throw InvalidInput("config.budgets entries must be >= 0");
      if (!config.budgets.empty() && b <= config.budgets.back()) {
        throw InvalidInput("config.budgets must be strictly increasing");
      }
      config.budgets.push_back(b);
    }
  }

  if (const auto it = doc.find("policies"); it != doc.end()) {
    if (!it->is_array()) {
      throw InvalidInput("config.policies must be an array");
    }
    for (std::size_t i = 0; i < it->size(); ++i) {
      const Json& pol = (*it)[i];
      const std::string where = "config.policies[" + std::to_string(i) + "]";
      check_keys(pol,
                 {"name", "quad_nodes", "bisect_tol", "bisect_max_iter",
                  "emax_arm_cap"},
                 where);
      PolicyEntry entry;
      entry.name = as_string(require(pol, "name", where), where + ".name");
      const bool known =
          config.random_cost
              ? parse_random_cost_policy_kind(entry.name).has_value()
              : parse_policy_kind(entry.name).has_value();
      if (!known) {
        throw InvalidInput(where + ".name \"" + entry.name +
                           "\" is not a policy of this instance family");
      }
      if (const auto f = pol.find("quad_nodes"); f != pol.end()) {
        const long long n = as_int(*f, where + ".quad_nodes");
        if (n < 2 || n > 1024) {
          throw InvalidInput(where + ".quad_nodes must be in [2, 1024]");
        }
        entry.config.quad_nodes = static_cast<int>(n);
      }
      if (const auto f = pol.find("bisect_tol"); f != pol.end()) {
        entry.config.bisect_tol = as_double(*f, where + ".bisect_tol");
        if (!(entry.config.bisect_tol > 0.0)) {
          throw InvalidInput(where + ".bisect_tol must be positive");
        }
      }
      if (const auto f = pol.find("bisect_max_iter"); f != pol.end()) {
        const long long n = as_int(*f, where + ".bisect_max_iter");
        if (n < 1 || n > 1000) {
          throw InvalidInput(where + ".bisect_max_iter must be in [1, 1000]");
        }
        entry.config.bisect_max_iter = static_cast<int>(n);
      }
      if (const auto f = pol.find("emax_arm_cap"); f != pol.end()) {
        const long long n = as_int(*f, where + ".emax_arm_cap");
        if (n < 1 || n > 16) {
          throw InvalidInput(where + ".emax_arm_cap must be in [1, 16]");
        }
        entry.config.emax_arm_cap = static_cast<int>(n);
      }
      config.policies.push_back(std::move(entry));
    }
  }

  if (const auto it = doc.find("bounds"); it != doc.end()) {
    if (!it->is_array()) {
      throw InvalidInput("config.bounds must be an array");
    }
    for (std::size_t i = 0; i < it->size(); ++i) {
      const std::string name =
          as_string((*it)[i], "config.bounds[" + std::to_string(i) + "]");
      if (!parse_bound_kind(name).has_value()) {
        throw InvalidInput("config.bounds[" + std::to_string(i) +
                           "] \"" + name + "\" is not a bound name");
      }
      if (config.random_cost && name != "w_bts") {
        throw InvalidInput(
            "random-cost instances support only the w_bts bound");
      }
      config.bounds.push_back(name);
    }
  }

  if (const auto it = doc.find("episodes"); it != doc.end()) {
    config.episodes = as_int(*it, "config.episodes");
    if (config.episodes < 2) {
      throw InvalidInput("config.episodes must be >= 2");
    }
  }
  if (const auto it = doc.find("bound_samples"); it != doc.end()) {
    config.bound_samples = as_int(*it, "config.bound_samples");
    if (config.bound_samples < 2) {
      throw InvalidInput("config.bound_samples must be >= 2");
    }
  }
  if (const auto it = doc.find("base_seed"); it != doc.end()) {
    const long long seed = as_int(*it, "config.base_seed");
    if (seed < 0) throw InvalidInput("config.base_seed must be >= 0");
    config.base_seed = static_cast<std::uint64_t>(seed);
  }
  if (const auto it = doc.find("threads"); it != doc.end()) {
    const long long threads = as_int(*it, "config.threads");
    if (threads < 1 || threads > 64) {
      throw InvalidInput("config.threads must be in [1, 64]");
    }
    config.threads = static_cast<int>(threads);
  }
  if (const auto it = doc.find("output"); it != doc.end()) {
    config.output = as_string(*it, "config.output");
  }
  return config;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw InvalidInput("cannot open config file: " + path);
  }
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

std::string serialize_config(const ExperimentConfig& config) {
  Json doc;
  doc["schema_version"] = 1;
  Json inst;
  Json arms = Json::array();
  if (config.random_cost) {
    inst["budget"] = config.random_instance.budget;
    for (const RandomCostArm& arm : config.random_instance.arms) {
      Json cm;
      cm["cost_low"] = arm.cost.cost_low;
      cm["cost_high"] = arm.cost.cost_high;
      cm["alpha"] = arm.cost.prior.alpha;
      cm["beta"] = arm.cost.prior.beta;
      Json out;
      out["cost_model"] = std::move(cm);
      out["trials"] = arm.model.trials;
      out["alpha"] = arm.reward_prior.alpha;
      out["beta"] = arm.reward_prior.beta;
      arms.push_back(std::move(out));
    }
  } else {
    inst["budget"] = config.instance.budget;
    for (const ArmSpec& arm : config.instance.arms) {
      Json out;
      out["cost"] = arm.cost;
      out["trials"] = arm.model.trials;
      out["alpha"] = arm.prior.alpha;
      out["beta"] = arm.prior.beta;
      arms.push_back(std::move(out));
    }
  }
  inst["arms"] = std::move(arms);
  doc["instance"] = std::move(inst);
  if (!config.budgets.empty()) doc["budgets"] = config.budgets;
  Json policies = Json::array();
  for (const PolicyEntry& entry : config.policies) {
    Json out;
    out["name"] = entry.name;
    out["quad_nodes"] = entry.config.quad_nodes;
    out["bisect_tol"] = entry.config.bisect_tol;
    out["bisect_max_iter"] = entry.config.bisect_max_iter;
    out["emax_arm_cap"] = entry.config.emax_arm_cap;
    policies.push_back(std::move(out));
  }
  doc["policies"] = std::move(policies);
  if (!config.bounds.empty()) doc["bounds"] = config.bounds;
  doc["episodes"] = config.episodes;
  doc["bound_samples"] = config.bound_samples;
  doc["base_seed"] = config.base_seed;
  doc["threads"] = config.threads;
  if (!config.output.empty()) doc["output"] = config.output;
  return doc.dump(2) + "\n";
}

}  // namespace irs
