// Copyright (c) 2026 stratsearch contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "stratsearch/controller.hpp"
#include "stratsearch/errors.hpp"
#include "stratsearch/run_config.hpp"
#include "stratsearch/search_space.hpp"

namespace stratsearch {

enum class TrialOrigin { RandomInit, ControllerProposal };

enum class TrialStatus { Pending, Running, Succeeded, Failed };

const char* to_string(TrialOrigin origin);
const char* to_string(TrialStatus status);

struct Trial {
  std::int64_t trial_id = -1;
  StrategyVector strategy;
  Eigen::VectorXd native;
  TrialOrigin origin = TrialOrigin::RandomInit;
  std::int64_t parent_trial_id = -1;              // proposals only
  std::uint64_t proposal_seed = 0;                // proposals only
  std::optional<PolicyStep> policy_step;          // proposals only
  std::uint64_t eval_seed = 0;
  TrialStatus status = TrialStatus::Pending;
  double reward = 0.0;                            // valid when Succeeded
  std::string error_kind;                         // valid when Failed
  std::string error_message;
  double submitted_at_seconds = 0.0;              // steady-clock, in-memory only
  double finished_at_seconds = 0.0;
};

struct SearchRun {
  RunConfig config;
  std::vector<Trial> trials;
  long epoch = 0;  // completed Succeeded trials consumed by the loop
  std::int64_t best_trial_id = -1;
  double best_reward = 0.0;
  StrategyVector best_strategy;
  Eigen::VectorXd best_native;
  ControllerParams params;
  ControllerState state;
  bool completed = false;
};

/// Test hooks. `abort_after_completion` is called after each completion's
/// records are flushed; returning true aborts the process loop the way a
/// crash would (no final checkpoint, no run_complete record). A non-null
/// `evaluator` replaces the one the config would build.
struct RunHooks {
  std::function<bool(long completions)> abort_after_completion;
  const Evaluator* evaluator = nullptr;
};

/// Thrown when a hook aborts the run.
class RunAborted : public std::runtime_error {
 public:
  RunAborted() : std::runtime_error("run aborted by hook") {}
};

// Run-directory layout.
inline constexpr const char* kTrialLogFile = "trials.jsonl";
inline constexpr const char* kConfigFile = "config.json";
inline constexpr const char* kCheckpointDir = "checkpoints";
inline constexpr int kCheckpointEvery = 10;  // completions between checkpoints

/// Algorithm loop: launch initial random trials, evaluate on a worker pool,
/// and on each success update the controller and propose a successor, until
/// `max_epoch` completions. Fully deterministic for workers == 1 and a
/// deterministic evaluator.
SearchRun run_search(const RunConfig& config, const RunHooks* hooks = nullptr);

/// Continues an interrupted run from its directory: restores the latest
/// checkpoint, replays logged events past it, re-launches unfinished trials
/// with their original seeds, and finishes the epoch budget.
SearchRun resume(const std::filesystem::path& run_dir, const RunHooks* hooks = nullptr);

/// Replays the full log against the first (epoch-0) checkpoint and returns
/// the reconstructed controller; bit-identical to the final checkpoint for
/// serial runs.
ControllerCheckpoint replay_controller(const std::filesystem::path& run_dir);

}  // namespace stratsearch
