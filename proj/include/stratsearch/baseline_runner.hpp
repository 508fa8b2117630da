// Copyright (c) 2026 stratsearch contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>

#include "stratsearch/baselines.hpp"
#include "stratsearch/run_config.hpp"

namespace stratsearch {

/// Runs a hill-climbing baseline over the config's search space and
/// evaluator, starting from 0.5 in every coordinate. Each evaluation is
/// logged with the orchestrator's JSONL record schema (origin "baseline");
/// a result.json summary lands next to the log.
HillClimbResult run_baseline(const RunConfig& config, HillClimbMode mode);

}  // namespace stratsearch
