// Copyright (c) 2026 stratsearch contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <utility>
#include <vector>

#include "stratsearch/search_space.hpp"

namespace stratsearch {

// Sampled actions are clamped into this closed interval so a proposal is
// always a usable strategy while the policy mean stays free to approach the
// boundary.
inline constexpr double kActionLow = 0.001;
inline constexpr double kActionHigh = 0.999;

struct ControllerConfig {
  int dim = 0;                     // search-space dimension d
  int hidden_size = 32;            // recurrent hidden width
  double policy_stddev = 0.1;      // exploration width in normalized units
  double learning_rate = 0.1;      // RMSprop step size
  double rmsprop_decay = 0.9;      // accumulator decay rho
  double rmsprop_epsilon = 1e-8;
  bool use_reward_baseline = false;
  double baseline_momentum = 0.9;  // moving-average momentum when enabled

  /// Throws ConfigError on violated invariants.
  void validate() const;
};

/// The policy's weight tensors. Also reused as the shape-matched bundle for
/// gradients and RMSprop accumulators.
struct ControllerParams {
  Eigen::MatrixXd w_xh;  // hidden_size x dim
  Eigen::MatrixXd w_hh;  // hidden_size x hidden_size
  Eigen::VectorXd b_h;   // hidden_size
  Eigen::MatrixXd w_ho;  // 2*dim x hidden_size
  Eigen::VectorXd b_o;   // 2*dim

  static ControllerParams zeros(const ControllerConfig& config);

  bool same_shape(const ControllerParams& other) const;
  bool all_finite() const;

  /// Exact elementwise equality, used by checkpoint round-trip checks.
  bool equals(const ControllerParams& other) const;
};

struct ControllerState {
  Eigen::VectorXd hidden;       // persistent recurrent state
  ControllerParams rms_acc;     // RMSprop accumulators, elementwise >= 0
  double reward_baseline = 0.0;
};

/// Everything recorded about one policy proposal: the conditioning input,
/// the per-dimension means (first softmax channel), the sampled action, its
/// Gaussian log-density, and the hidden state the step was taken from.
struct PolicyStep {
  Eigen::VectorXd input;           // C_{i-1}
  Eigen::VectorXd means;           // in (0,1) per dimension
  StrategyVector sampled_action;   // C_i, within [kActionLow, kActionHigh]
  double log_prob = 0.0;
  Eigen::VectorXd hidden_before;
};

/// Fresh controller: weights i.i.d. uniform on [-0.08, 0.08]; hidden state,
/// accumulators and baseline all zero. Deterministic per seed.
std::pair<ControllerParams, ControllerState> init_controller(
    const ControllerConfig& config, std::uint64_t rng_seed);

/// One recurrent step: hidden' = tanh(W_xh x + W_hh h + b_h); each output
/// node emits two logits whose softmax's first channel is the mean; the
/// action is the mean plus Gaussian noise of width policy_stddev, clamped.
std::pair<PolicyStep, ControllerState> policy_forward(
    const ControllerParams& params, const ControllerState& state,
    const StrategyVector& prev, const ControllerConfig& config,
    std::uint64_t rng_seed);

/// Log-density of `action` under the policy at (input, hidden_before).
/// Pure re-evaluation; the finite-difference oracle in the tests differentiates
/// this function numerically.
double log_prob_of(const ControllerParams& params, const ControllerConfig& config,
                   const Eigen::VectorXd& input, const Eigen::VectorXd& hidden_before,
                   const Eigen::VectorXd& action);

/// Backprop gradient of log_prob_of with respect to every weight tensor,
/// treating hidden_before as a constant input.
ControllerParams log_prob_gradient(const ControllerParams& params,
                                   const ControllerConfig& config,
                                   const PolicyStep& step);

/// Reward-scaled RMSprop ascent step on the log-probability gradient:
///   g   = d log pi / d theta
///   acc <- rho * acc + (1 - rho) * g.^2
///   theta <- theta + lr * r' * g / (sqrt(acc) + eps)
/// where r' subtracts the moving baseline when enabled.
std::pair<ControllerParams, ControllerState> policy_update(
    const ControllerParams& params, const ControllerState& state,
    const PolicyStep& step, double reward, const ControllerConfig& config);

struct ControllerCheckpoint {
  ControllerConfig config;
  ControllerParams params;
  ControllerState state;
};

/// Versioned binary blob embedding the config and all tensors at full
/// precision; restore(checkpoint(x)) == x bit-exactly.
std::vector<std::uint8_t> save_checkpoint(const ControllerConfig& config,
                                          const ControllerParams& params,
                                          const ControllerState& state);

/// Throws DecodeError on corrupt, truncated, or incompatible blobs.
ControllerCheckpoint load_checkpoint(const std::vector<std::uint8_t>& blob);

}  // namespace stratsearch
