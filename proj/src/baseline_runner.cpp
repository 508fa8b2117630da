// Copyright (c) 2026 stratsearch contributors
// SPDX-License-Identifier: Apache-2.0

#include "stratsearch/baseline_runner.hpp"

#include <fstream>

#include "stratsearch/errors.hpp"
#include "stratsearch/orchestrator.hpp"
#include "stratsearch/rng.hpp"
#include "stratsearch/trial_log.hpp"

namespace stratsearch {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json vec_to_json(const Eigen::VectorXd& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

}  // namespace

HillClimbResult run_baseline(const RunConfig& config, HillClimbMode mode) {
  config.validate();
  if (config.output_dir.empty()) throw ConfigError("baseline run has no output directory");
  const fs::path dir = config.output_dir;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (!fs::is_directory(dir))
    throw ConfigError("cannot create output directory: " + dir.string());

  {
    std::ofstream out(dir / kConfigFile);
    if (!out) throw ConfigError("cannot write config copy in " + dir.string());
    out << run_config_to_json(config).dump(2) << "\n";
  }
  TrialLogWriter writer = TrialLogWriter::create(dir / kTrialLogFile);

  HillClimbConfig hc = config.baseline;
  hc.mode = mode;

  json names = json::array();
  for (const ParamSpec& p : config.search_space.params) names.push_back(p.name);
  writer.write_batch({{{"event", log_event::kHeader},
                       {"schema_version", kLogSchemaVersion},
                       {"dim", config.search_space.dim()},
                       {"param_names", names},
                       {"evaluator_type", config.evaluator.type},
                       {"master_seed", config.run.master_seed},
                       {"max_epoch", hc.max_evals},
                       {"initial_jobs", 1},
                       {"workers", 1},
                       {"baseline_mode",
                        mode == HillClimbMode::Discrete ? "discrete" : "continuous"}}});

  const auto evaluator = make_evaluator(config);
  long eval_index = 0;
  long best_index = -1;
  double best_value = 0.0;

  const ObjectiveFn objective = [&](const StrategyVector& x) {
    EvaluationRequest request;
    request.trial_id = eval_index;
    request.strategy = x;
    request.native = denormalize(config.search_space, x);
    request.rng_seed = derive_seed(config.run.master_seed, seed_stream::kBaselineEval,
                                   static_cast<std::uint64_t>(eval_index));
    return evaluator->evaluate(request).reward;
  };

  const TraceSink trace = [&](const StrategyVector& x, double value) {
    const Eigen::VectorXd native = denormalize(config.search_space, x);
    if (best_index < 0 || value > best_value) {
      best_index = eval_index;
      best_value = value;
    }
    writer.write_batch({{{"event", log_event::kTrialLaunched},
                         {"trial_id", eval_index},
                         {"origin", "baseline"},
                         {"strategy", vec_to_json(x)},
                         {"native", vec_to_json(native)},
                         {"eval_seed",
                          derive_seed(config.run.master_seed, seed_stream::kBaselineEval,
                                      static_cast<std::uint64_t>(eval_index))}},
                        {{"event", log_event::kTrialFinished},
                         {"trial_id", eval_index},
                         {"status", "succeeded"},
                         {"reward", value},
                         {"epoch", eval_index + 1}}});
    ++eval_index;
  };

  const StrategyVector start =
      StrategyVector::Constant(config.search_space.dim(), 0.5);
  const HillClimbResult result = hill_climb(objective, start, hc, trace);

  writer.write_batch({{{"event", log_event::kRunComplete},
                       {"epoch", result.evals},
                       {"best_trial_id", best_index},
                       {"best_reward", result.best_value}}});

  {
    std::ofstream out(dir / "result.json");
    const json summary = {
        {"mode", mode == HillClimbMode::Discrete ? "discrete" : "continuous"},
        {"best_value", result.best_value},
        {"evals", result.evals},
        {"best_strategy", vec_to_json(result.best)},
        {"best_native", vec_to_json(denormalize(config.search_space, result.best))}};
    out << summary.dump(2) << "\n";
  }
  return result;
}

}  // namespace stratsearch
