// Copyright (c) 2026 stratsearch contributors
// SPDX-License-Identifier: Apache-2.0
//
// Command-line entry point. Subcommands:
//   search    run the policy-gradient strategy search
//   resume    continue an interrupted run directory
//   report    summarize a run directory (text or json)
//   baseline  run a hill-climbing baseline over the same config
//   eval-once evaluate a single strategy (debugging)
//
// Exit codes: 0 success, 2 configuration error, 3 runtime/evaluator failure.

#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "stratsearch/baseline_runner.hpp"
#include "stratsearch/errors.hpp"
#include "stratsearch/orchestrator.hpp"
#include "stratsearch/report.hpp"
#include "stratsearch/rng.hpp"

namespace {

using nlohmann::json;
using namespace stratsearch;

json vec_to_json(const Eigen::VectorXd& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

void print_run_summary(const SearchRun& run) {
  std::cout << "completed " << run.epoch << " epochs, " << run.trials.size()
            << " trials launched\n";
  if (run.best_trial_id >= 0) {
    std::cout << "best trial " << run.best_trial_id << " reward " << run.best_reward
              << "\n";
    for (Eigen::Index k = 0; k < run.best_strategy.size(); ++k) {
      std::cout << "  " << run.config.search_space.params[static_cast<std::size_t>(k)].name
                << ": normalized " << run.best_strategy[k] << ", native "
                << run.best_native[k] << "\n";
    }
  } else {
    std::cout << "no completed trials\n";
  }
}

RunConfig load_with_overrides(const std::string& config_path, const std::string& out_dir,
                              long seed, bool seed_set, int workers, bool workers_set) {
  RunConfig config = load_run_config(config_path);
  config.output_dir = out_dir;
  if (seed_set) config.run.master_seed = static_cast<std::uint64_t>(seed);
  if (workers_set) {
    config.run.workers = workers;
    if (config.run.initial_jobs < config.run.workers)
      config.run.initial_jobs = config.run.workers;
    config.validate();
  }
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"black-box training-strategy search (policy-gradient controller + baselines)"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::string run_dir;
  std::string format = "text";
  std::string mode;
  std::string strategy_json;
  long seed = 0;
  int workers = 1;

  CLI::App* search = app.add_subcommand("search", "run the strategy search");
  search->add_option("--config", config_path, "run config JSON file")->required();
  search->add_option("--out", out_dir, "output run directory")->required();
  CLI::Option* seed_opt = search->add_option("--seed", seed, "master seed override");
  CLI::Option* workers_opt = search->add_option("--workers", workers, "worker count override");

  CLI::App* resume_cmd = app.add_subcommand("resume", "continue an interrupted run");
  resume_cmd->add_option("dir", run_dir, "run directory")->required();

  CLI::App* report_cmd = app.add_subcommand("report", "summarize a run directory");
  report_cmd->add_option("dir", run_dir, "run directory")->required();
  report_cmd->add_option("--format", format, "text or json")
      ->check(CLI::IsMember({"text", "json"}));

  CLI::App* baseline_cmd = app.add_subcommand("baseline", "run a hill-climbing baseline");
  baseline_cmd->add_option("--config", config_path, "run config JSON file")->required();
  baseline_cmd->add_option("--mode", mode, "discrete or continuous")
      ->required()
      ->check(CLI::IsMember({"discrete", "continuous"}));
  baseline_cmd->add_option("--out", out_dir, "output run directory")->required();
  CLI::Option* baseline_seed_opt =
      baseline_cmd->add_option("--seed", seed, "master seed override");

  CLI::App* eval_cmd = app.add_subcommand("eval-once", "evaluate one strategy");
  eval_cmd->add_option("--config", config_path, "run config JSON file")->required();
  eval_cmd->add_option("--strategy", strategy_json,
                       "JSON array of normalized values in [0,1]")
      ->required();
  CLI::Option* eval_seed_opt = eval_cmd->add_option("--seed", seed, "evaluation seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (search->parsed()) {
      const RunConfig config =
          load_with_overrides(config_path, out_dir, seed, !seed_opt->empty(), workers,
                              !workers_opt->empty());
      const SearchRun run = run_search(config);
      print_run_summary(run);
      return 0;
    }

    if (resume_cmd->parsed()) {
      const SearchRun run = resume(run_dir);
      print_run_summary(run);
      return 0;
    }

    if (report_cmd->parsed()) {
      const json report = build_report(run_dir);
      if (format == "json")
        std::cout << report.dump(2) << "\n";
      else
        std::cout << format_report_text(report);
      return 0;
    }

    if (baseline_cmd->parsed()) {
      RunConfig config = load_run_config(config_path);
      config.output_dir = out_dir;
      if (!baseline_seed_opt->empty())
        config.run.master_seed = static_cast<std::uint64_t>(seed);
      const HillClimbMode hc_mode =
          mode == "discrete" ? HillClimbMode::Discrete : HillClimbMode::Continuous;
      const HillClimbResult result = run_baseline(config, hc_mode);
      std::cout << "best value " << result.best_value << " after " << result.evals
                << " evaluations\n";
      for (Eigen::Index k = 0; k < result.best.size(); ++k) {
        std::cout << "  " << config.search_space.params[static_cast<std::size_t>(k)].name
                  << ": normalized " << result.best[k] << "\n";
      }
      return 0;
    }

    if (eval_cmd->parsed()) {
      RunConfig config = load_run_config(config_path);
      json parsed;
      try {
        parsed = json::parse(strategy_json);
      } catch (const json::parse_error& e) {
        throw ConfigError(std::string("--strategy is not valid JSON: ") + e.what());
      }
      if (!parsed.is_array())
        throw ConfigError("--strategy must be a JSON array of normalized values");
      StrategyVector strategy(static_cast<Eigen::Index>(parsed.size()));
      for (std::size_t i = 0; i < parsed.size(); ++i)
        strategy[static_cast<Eigen::Index>(i)] = parsed[i].get<double>();
      require_valid_strategy(config.search_space, strategy);

      EvaluationRequest request;
      request.trial_id = 0;
      request.strategy = strategy;
      request.native = denormalize(config.search_space, strategy);
      request.rng_seed = eval_seed_opt->empty()
                             ? derive_seed(config.run.master_seed,
                                           seed_stream::kEvaluation, 0)
                             : static_cast<std::uint64_t>(seed);
      const auto evaluator = make_evaluator(config);
      const EvaluationResult result = evaluator->evaluate(request);
      json detail = json::object();
      for (const auto& [key, value] : result.detail) detail[key] = value;
      const json out = {{"reward", result.reward},
                        {"strategy", vec_to_json(strategy)},
                        {"native", vec_to_json(request.native)},
                        {"seed", request.rng_seed},
                        {"detail", detail}};
      std::cout << out.dump(2) << "\n";
      return 0;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
