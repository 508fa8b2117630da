// Copyright (c) 2026 stratsearch contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace stratsearch {

/// Invalid run configuration (bad file, unknown key, violated invariant).
/// The CLI maps this to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Corrupt or incompatible serialized state (checkpoint, volume file, log).
class DecodeError : public std::runtime_error {
 public:
  explicit DecodeError(const std::string& what) : std::runtime_error(what) {}
};

/// Why a trial evaluation failed to deliver a reward.
enum class EvalFailureKind {
  NonZeroExit,    // child process exited with a non-zero status
  Timeout,        // child process exceeded its deadline
  MissingReward,  // no parseable "REWARD: <float>" line on stdout
  SpawnFailure,   // the child could not be started at all
  BadValue,       // evaluator produced a non-finite reward
  Other,          // evaluator threw something else
};

const char* to_string(EvalFailureKind kind);

/// Evaluation failure. Carries the failure kind and the offending strategy
/// (as a plain vector so this header stays Eigen-free).
class EvalError : public std::runtime_error {
 public:
  EvalError(EvalFailureKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  EvalFailureKind kind() const { return kind_; }

 private:
  EvalFailureKind kind_;
};

}  // namespace stratsearch
