// Copyright (c) 2026 stratsearch contributors
// SPDX-License-Identifier: Apache-2.0

#include "stratsearch/run_config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "stratsearch/errors.hpp"
#include "stratsearch/external_evaluator.hpp"

namespace stratsearch {

using nlohmann::json;

namespace {

void require_object(const json& node, const std::string& context) {
  if (!node.is_object())
    throw ConfigError("config section '" + context + "' must be a JSON object");
}

void reject_unknown_keys(const json& node, std::initializer_list<const char*> allowed,
                         const std::string& context) {
  const std::set<std::string> allowed_set(allowed.begin(), allowed.end());
  for (const auto& [key, value] : node.items()) {
    (void)value;
    if (!allowed_set.count(key))
      throw ConfigError("unknown key '" + key + "' in config section '" + context + "'");
  }
}

template <typename T>
T get_or(const json& node, const char* key, T fallback, const std::string& context) {
  if (!node.contains(key)) return fallback;
  try {
    return node.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError("bad value for '" + context + "." + key + "': " + e.what());
  }
}

template <typename T>
T get_required(const json& node, const char* key, const std::string& context) {
  if (!node.contains(key))
    throw ConfigError("missing required key '" + context + "." + key + "'");
  try {
    return node.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError("bad value for '" + context + "." + key + "': " + e.what());
  }
}

SearchSpace parse_search_space(const json& node) {
  if (!node.is_array())
    throw ConfigError("config section 'search_space' must be an array");
  SearchSpace space;
  for (std::size_t i = 0; i < node.size(); ++i) {
    const json& entry = node[i];
    const std::string context = "search_space[" + std::to_string(i) + "]";
    require_object(entry, context);
    reject_unknown_keys(entry, {"name", "min", "max", "kind"}, context);
    ParamSpec spec;
    spec.name = get_required<std::string>(entry, "name", context);
    spec.min = get_required<double>(entry, "min", context);
    spec.max = get_required<double>(entry, "max", context);
    spec.kind = param_kind_from_string(
        get_or<std::string>(entry, "kind", "hyperparameter", context));
    space.params.push_back(std::move(spec));
  }
  space.validate();
  return space;
}

ControllerConfig parse_controller(const json& node, int dim) {
  ControllerConfig cc;
  cc.dim = dim;
  if (node.is_null()) return cc;
  require_object(node, "controller");
  reject_unknown_keys(node,
                      {"hidden_size", "policy_stddev", "learning_rate", "rmsprop_decay",
                       "rmsprop_epsilon", "use_reward_baseline", "baseline_momentum"},
                      "controller");
  cc.hidden_size = get_or<int>(node, "hidden_size", cc.hidden_size, "controller");
  cc.policy_stddev = get_or<double>(node, "policy_stddev", cc.policy_stddev, "controller");
  cc.learning_rate = get_or<double>(node, "learning_rate", cc.learning_rate, "controller");
  cc.rmsprop_decay = get_or<double>(node, "rmsprop_decay", cc.rmsprop_decay, "controller");
  cc.rmsprop_epsilon =
      get_or<double>(node, "rmsprop_epsilon", cc.rmsprop_epsilon, "controller");
  cc.use_reward_baseline =
      get_or<bool>(node, "use_reward_baseline", cc.use_reward_baseline, "controller");
  cc.baseline_momentum =
      get_or<double>(node, "baseline_momentum", cc.baseline_momentum, "controller");
  cc.validate();
  return cc;
}

EvaluatorConfig parse_evaluator(const json& node, Eigen::Index dim) {
  require_object(node, "evaluator");
  EvaluatorConfig ec;
  ec.type = get_required<std::string>(node, "type", "evaluator");
  if (ec.type == "sphere") {
    reject_unknown_keys(node, {"type", "optimum"}, "evaluator");
    if (node.contains("optimum")) {
      const auto values = get_required<std::vector<double>>(node, "optimum", "evaluator");
      if (static_cast<Eigen::Index>(values.size()) != dim)
        throw ConfigError("evaluator.optimum length must match the search-space dimension");
      Eigen::VectorXd opt(dim);
      for (Eigen::Index k = 0; k < dim; ++k) opt[k] = values[static_cast<std::size_t>(k)];
      ec.sphere_optimum = opt;
    }
  } else if (ec.type == "rosenbrock") {
    reject_unknown_keys(node, {"type"}, "evaluator");
  } else if (ec.type == "sim_trainer") {
    reject_unknown_keys(node, {"type", "noise_stddev", "fixture_seed"}, "evaluator");
    ec.sim_noise_stddev = get_or<double>(node, "noise_stddev", ec.sim_noise_stddev, "evaluator");
    ec.sim_fixture_seed =
        get_or<std::uint64_t>(node, "fixture_seed", ec.sim_fixture_seed, "evaluator");
    if (ec.sim_noise_stddev < 0.0)
      throw ConfigError("evaluator.noise_stddev must be >= 0");
  } else if (ec.type == "toy_segmentation") {
    reject_unknown_keys(node, {"type", "fixture_seed"}, "evaluator");
    ec.toy_fixture_seed =
        get_or<std::uint64_t>(node, "fixture_seed", ec.toy_fixture_seed, "evaluator");
  } else if (ec.type == "external") {
    reject_unknown_keys(node, {"type", "command", "timeout_seconds"}, "evaluator");
    ec.external_command = get_required<std::string>(node, "command", "evaluator");
    ec.external_timeout_seconds =
        get_or<double>(node, "timeout_seconds", ec.external_timeout_seconds, "evaluator");
  } else {
    throw ConfigError("unknown evaluator type '" + ec.type +
                      "' (expected sphere, rosenbrock, sim_trainer, toy_segmentation, "
                      "or external)");
  }
  return ec;
}

RunSettings parse_run(const json& node) {
  RunSettings rs;
  if (node.is_null()) return rs;
  require_object(node, "run");
  reject_unknown_keys(node, {"max_epoch", "initial_jobs", "workers", "master_seed"},
                      "run");
  rs.max_epoch = get_or<long>(node, "max_epoch", rs.max_epoch, "run");
  rs.initial_jobs = get_or<int>(node, "initial_jobs", rs.initial_jobs, "run");
  rs.workers = get_or<int>(node, "workers", rs.workers, "run");
  rs.master_seed = get_or<std::uint64_t>(node, "master_seed", rs.master_seed, "run");
  return rs;
}

HillClimbConfig parse_baseline(const json& node) {
  HillClimbConfig hc;
  hc.max_evals = 0;  // resolved against run.max_epoch later
  if (node.is_null()) return hc;
  require_object(node, "baseline");
  reject_unknown_keys(node, {"grid_dim", "step", "growth", "min_step", "max_evals"},
                      "baseline");
  hc.grid_dim = get_or<int>(node, "grid_dim", hc.grid_dim, "baseline");
  hc.step = get_or<double>(node, "step", hc.step, "baseline");
  hc.growth = get_or<double>(node, "growth", hc.growth, "baseline");
  hc.min_step = get_or<double>(node, "min_step", hc.min_step, "baseline");
  hc.max_evals = get_or<long>(node, "max_evals", hc.max_evals, "baseline");
  return hc;
}

}  // namespace

void RunConfig::validate() const {
  search_space.validate();
  if (controller.dim != search_space.dim())
    throw ConfigError("controller dimension does not match the search space");
  controller.validate();
  if (run.workers < 1) throw ConfigError("run.workers must be >= 1");
  if (run.initial_jobs < 1) throw ConfigError("run.initial_jobs must be >= 1");
  if (run.max_epoch < run.initial_jobs)
    throw ConfigError("run.max_epoch must be >= run.initial_jobs");
  if (evaluator.type == "external" &&
      evaluator.external_command.find("{request}") == std::string::npos)
    throw ConfigError("evaluator.command must contain a {request} placeholder");
}

RunConfig parse_run_config(const json& doc) {
  require_object(doc, "<root>");
  reject_unknown_keys(doc, {"search_space", "controller", "evaluator", "run", "baseline"},
                      "<root>");
  if (!doc.contains("search_space"))
    throw ConfigError("missing required config section 'search_space'");
  if (!doc.contains("evaluator"))
    throw ConfigError("missing required config section 'evaluator'");

  RunConfig config;
  config.search_space = parse_search_space(doc.at("search_space"));
  config.controller = parse_controller(doc.value("controller", json()),
                                       static_cast<int>(config.search_space.dim()));
  config.evaluator = parse_evaluator(doc.at("evaluator"), config.search_space.dim());
  config.run = parse_run(doc.value("run", json()));
  if (config.run.initial_jobs == 0) config.run.initial_jobs = config.run.workers;
  config.baseline = parse_baseline(doc.value("baseline", json()));
  if (config.baseline.max_evals == 0) config.baseline.max_evals = config.run.max_epoch;
  config.validate();
  return config;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config file " + path.string() + " is not valid JSON: " + e.what());
  }
  return parse_run_config(doc);
}

json run_config_to_json(const RunConfig& config) {
  json space = json::array();
  for (const ParamSpec& p : config.search_space.params) {
    space.push_back({{"name", p.name},
                     {"min", p.min},
                     {"max", p.max},
                     {"kind", to_string(p.kind)}});
  }

  json controller = {{"hidden_size", config.controller.hidden_size},
                     {"policy_stddev", config.controller.policy_stddev},
                     {"learning_rate", config.controller.learning_rate},
                     {"rmsprop_decay", config.controller.rmsprop_decay},
                     {"rmsprop_epsilon", config.controller.rmsprop_epsilon},
                     {"use_reward_baseline", config.controller.use_reward_baseline},
                     {"baseline_momentum", config.controller.baseline_momentum}};

  json evaluator = {{"type", config.evaluator.type}};
  if (config.evaluator.type == "sphere" && config.evaluator.sphere_optimum) {
    std::vector<double> opt(config.evaluator.sphere_optimum->data(),
                            config.evaluator.sphere_optimum->data() +
                                config.evaluator.sphere_optimum->size());
    evaluator["optimum"] = opt;
  } else if (config.evaluator.type == "sim_trainer") {
    evaluator["noise_stddev"] = config.evaluator.sim_noise_stddev;
    evaluator["fixture_seed"] = config.evaluator.sim_fixture_seed;
  } else if (config.evaluator.type == "toy_segmentation") {
    evaluator["fixture_seed"] = config.evaluator.toy_fixture_seed;
  } else if (config.evaluator.type == "external") {
    evaluator["command"] = config.evaluator.external_command;
    evaluator["timeout_seconds"] = config.evaluator.external_timeout_seconds;
  }

  const json run = {{"max_epoch", config.run.max_epoch},
                    {"initial_jobs", config.run.initial_jobs},
                    {"workers", config.run.workers},
                    {"master_seed", config.run.master_seed}};

  const json baseline = {{"grid_dim", config.baseline.grid_dim},
                         {"step", config.baseline.step},
                         {"growth", config.baseline.growth},
                         {"min_step", config.baseline.min_step},
                         {"max_evals", config.baseline.max_evals}};

  return {{"search_space", space},
          {"controller", controller},
          {"evaluator", evaluator},
          {"run", run},
          {"baseline", baseline}};
}

std::unique_ptr<Evaluator> make_evaluator(const RunConfig& config) {
  const Eigen::Index dim = config.search_space.dim();
  const EvaluatorConfig& ec = config.evaluator;
  if (ec.type == "sphere") {
    return std::make_unique<SphereSurface>(
        ec.sphere_optimum ? *ec.sphere_optimum : SphereSurface::default_optimum(dim));
  }
  if (ec.type == "rosenbrock") return std::make_unique<RosenbrockSurface>(dim);
  if (ec.type == "sim_trainer")
    return std::make_unique<SimTrainerSurface>(dim, ec.sim_noise_stddev,
                                               ec.sim_fixture_seed);
  if (ec.type == "toy_segmentation")
    return std::make_unique<ToySegmentationEvaluator>(config.search_space,
                                                      ec.toy_fixture_seed);
  if (ec.type == "external")
    return std::make_unique<ExternalEvaluator>(config.search_space, ec.external_command,
                                               ec.external_timeout_seconds);
  throw ConfigError("unknown evaluator type '" + ec.type + "'");
}

}  // namespace stratsearch
