// Copyright (c) 2026 stratsearch contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "stratsearch/baselines.hpp"
#include "stratsearch/controller.hpp"
#include "stratsearch/objectives.hpp"
#include "stratsearch/search_space.hpp"

namespace stratsearch {

struct EvaluatorConfig {
  std::string type;  // sphere | rosenbrock | sim_trainer | toy_segmentation | external

  std::optional<Eigen::VectorXd> sphere_optimum;  // sphere; defaults per dimension

  double sim_noise_stddev = 0.02;                       // sim_trainer
  std::uint64_t sim_fixture_seed = kSimTrainerDefaultSeed;

  std::uint64_t toy_fixture_seed = kToySegmentationDefaultSeed;  // toy_segmentation

  std::string external_command;        // external; must contain {request}
  double external_timeout_seconds = 0.0;
};

struct RunSettings {
  long max_epoch = 1000;   // completed trials consumed by the search loop
  int initial_jobs = 0;    // 0 resolves to `workers`
  int workers = 1;
  std::uint64_t master_seed = 0;
};

struct RunConfig {
  SearchSpace search_space;
  ControllerConfig controller;  // dim is filled from the search space
  EvaluatorConfig evaluator;
  RunSettings run;
  HillClimbConfig baseline;     // defaults; mode/max_evals set by the CLI

  std::filesystem::path output_dir;  // runtime only, never persisted

  void validate() const;
};

/// Strict parser: unknown keys anywhere are ConfigErrors.
RunConfig parse_run_config(const nlohmann::json& doc);
RunConfig load_run_config(const std::filesystem::path& path);

/// Resolved config (defaults filled in) for the run-directory copy;
/// parse_run_config(run_config_to_json(c)) reproduces c.
nlohmann::json run_config_to_json(const RunConfig& config);

std::unique_ptr<Evaluator> make_evaluator(const RunConfig& config);

}  // namespace stratsearch
