// Copyright (c) 2026 stratsearch contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>

#include "stratsearch/objectives.hpp"
#include "stratsearch/search_space.hpp"

namespace stratsearch {

/// Runs an external trainer per trial. The request is written as JSON
/// ({trial_id, seed, params: [{name, normalized, native}]}) to a file in a
/// per-trial temp directory; every "{request}" placeholder in the command
/// template is replaced by that path and the command runs under /bin/sh.
/// The last stdout line of the form "REWARD: <float>" becomes the reward.
///
/// Failures throw EvalError with kind NonZeroExit, Timeout, MissingReward,
/// or SpawnFailure.
class ExternalEvaluator : public Evaluator {
 public:
  /// timeout_seconds <= 0 disables the deadline.
  ExternalEvaluator(SearchSpace space, std::string command_template,
                    double timeout_seconds = 0.0);

  EvaluationResult evaluate(const EvaluationRequest& request) const override;

  /// The JSON document written for a request; exposed for protocol tests.
  std::string request_json(const EvaluationRequest& request) const;

 private:
  SearchSpace space_;
  std::string command_template_;
  double timeout_seconds_;
};

}  // namespace stratsearch
