// Copyright (c) 2026 stratsearch contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "stratsearch/search_space.hpp"
#include "stratsearch/volume.hpp"

namespace stratsearch {

struct EvaluationRequest {
  std::int64_t trial_id = 0;
  StrategyVector strategy;    // normalized coordinates
  Eigen::VectorXd native;     // denormalized values, same order
  std::uint64_t rng_seed = 0;
};

struct EvaluationResult {
  std::int64_t trial_id = 0;
  double reward = 0.0;  // higher is better
  double wall_time_seconds = 0.0;
  std::map<std::string, double> detail;
};

/// A reward evaluator standing in for "train a model, return validation
/// accuracy". Implementations must be safe for concurrent invocation on
/// distinct requests and throw EvalError when a reward cannot be produced.
class Evaluator {
 public:
  virtual ~Evaluator() = default;
  virtual EvaluationResult evaluate(const EvaluationRequest& request) const = 0;
};

/// 1 - mean squared distance from a hidden optimum; maximum 1 at `optimum`.
class SphereSurface : public Evaluator {
 public:
  explicit SphereSurface(Eigen::VectorXd optimum);

  /// Default optimum pattern: coordinate k is 0.3 (even k) or 0.7 (odd k).
  static Eigen::VectorXd default_optimum(Eigen::Index dim);

  EvaluationResult evaluate(const EvaluationRequest& request) const override;
  const Eigen::VectorXd& optimum() const { return optimum_; }

 private:
  Eigen::VectorXd optimum_;
};

/// Classic banana valley mapped from [0,1]^d to [-2,2]^d, negated and scaled
/// so the range is (-inf, 1] with the maximum 1 at x = 0.75 in every
/// coordinate. Requires d >= 2.
class RosenbrockSurface : public Evaluator {
 public:
  explicit RosenbrockSurface(Eigen::Index dim);
  EvaluationResult evaluate(const EvaluationRequest& request) const override;

 private:
  Eigen::Index dim_;
};

/// Committed constants of a SimTrainerSurface: weighted Gaussian bumps per
/// coordinate plus pairwise bump-bump interactions. The construction is
/// seeded and fixed; tests pin the generated values.
struct SimTrainerParams {
  Eigen::VectorXd centers;    // bump peak per coordinate, in [0.25, 0.75]
  Eigen::VectorXd widths;     // bump width per coordinate, in [0.18, 0.30]
  Eigen::VectorXd weights;    // normalized to sum 1
  Eigen::MatrixXd couplings;  // upper triangle used, entries in [-0.05, 0.05]

  static SimTrainerParams generate(Eigen::Index dim, std::uint64_t fixture_seed);
};

inline constexpr std::uint64_t kSimTrainerDefaultSeed = 7;

/// Synthetic stand-in for a training job with per-coordinate preferences:
///   score(x) = 0.15 + 0.75 * sum_k w_k b_k(x_k)
///            + sum_{k<l} a_kl (b_k(x_k) - 0.5)(b_l(x_l) - 0.5)
/// with b_k a unit-height Gaussian bump. The reward is score plus seeded
/// Gaussian noise, clamped to [0, 1].
class SimTrainerSurface : public Evaluator {
 public:
  SimTrainerSurface(Eigen::Index dim, double noise_stddev,
                    std::uint64_t fixture_seed = kSimTrainerDefaultSeed);

  EvaluationResult evaluate(const EvaluationRequest& request) const override;

  /// Noise-free response surface.
  double score(const StrategyVector& x) const;
  const SimTrainerParams& params() const { return params_; }

 private:
  SimTrainerParams params_;
  double noise_stddev_;
};

/// One toy segmentation subject: a noisy volume and its ground-truth mask.
struct ToySegmentationCase {
  Volume3D image;
  LabelVolume truth;
};

inline constexpr std::uint64_t kToySegmentationDefaultSeed = 11;

/// Desk-scale segmentation objective. A fixed-threshold segmenter is run on
/// each fixture volume after the strategy's augmentation policy is applied;
/// the reward is the mean Dice score. Augmentation probabilities are taken
/// from search-space parameters named after the transforms; a parameter
/// named "learning_rate" calibrates the threshold (best at normalized 0.45).
class ToySegmentationEvaluator : public Evaluator {
 public:
  ToySegmentationEvaluator(SearchSpace space,
                           std::uint64_t fixture_seed = kToySegmentationDefaultSeed);

  EvaluationResult evaluate(const EvaluationRequest& request) const override;

  static std::vector<ToySegmentationCase> make_fixture_cases(std::uint64_t fixture_seed);
  const std::vector<ToySegmentationCase>& cases() const { return cases_; }

 private:
  SearchSpace space_;
  std::vector<ToySegmentationCase> cases_;
  std::vector<int> prob_index_;  // search-space index per transform, -1 if absent
  int lr_index_ = -1;
};

}  // namespace stratsearch
