// Copyright (c) 2026 stratsearch contributors
// SPDX-License-Identifier: Apache-2.0

#include "stratsearch/objectives.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "stratsearch/augmentation.hpp"
#include "stratsearch/dice.hpp"
#include "stratsearch/errors.hpp"
#include "stratsearch/rng.hpp"

namespace stratsearch {

// --- sphere ------------------------------------------------------------------

SphereSurface::SphereSurface(Eigen::VectorXd optimum) : optimum_(std::move(optimum)) {
  if (optimum_.size() == 0)
    throw ConfigError("sphere surface needs a non-empty optimum");
  for (Eigen::Index k = 0; k < optimum_.size(); ++k) {
    if (!(optimum_[k] >= 0.0 && optimum_[k] <= 1.0))
      throw ConfigError("sphere optimum must lie in [0,1]^d");
  }
}

Eigen::VectorXd SphereSurface::default_optimum(Eigen::Index dim) {
  Eigen::VectorXd opt(dim);
  for (Eigen::Index k = 0; k < dim; ++k) opt[k] = (k % 2 == 0) ? 0.3 : 0.7;
  return opt;
}

EvaluationResult SphereSurface::evaluate(const EvaluationRequest& request) const {
  if (request.strategy.size() != optimum_.size())
    throw std::invalid_argument("sphere surface: dimension mismatch");
  const double mean_sq_dist =
      (request.strategy - optimum_).squaredNorm() / static_cast<double>(optimum_.size());
  EvaluationResult result;
  result.trial_id = request.trial_id;
  result.reward = 1.0 - mean_sq_dist;
  return result;
}

// --- rosenbrock ----------------------------------------------------------------

RosenbrockSurface::RosenbrockSurface(Eigen::Index dim) : dim_(dim) {
  if (dim_ < 2) throw ConfigError("rosenbrock surface needs dimension >= 2");
}

EvaluationResult RosenbrockSurface::evaluate(const EvaluationRequest& request) const {
  if (request.strategy.size() != dim_)
    throw std::invalid_argument("rosenbrock surface: dimension mismatch");
  double sum = 0.0;
  for (Eigen::Index k = 0; k + 1 < dim_; ++k) {
    const double a = 4.0 * request.strategy[k] - 2.0;
    const double b = 4.0 * request.strategy[k + 1] - 2.0;
    const double t1 = b - a * a;
    const double t2 = 1.0 - a;
    sum += 100.0 * t1 * t1 + t2 * t2;
  }
  EvaluationResult result;
  result.trial_id = request.trial_id;
  result.reward = 1.0 - sum / (100.0 * static_cast<double>(dim_ - 1));
  return result;
}

// --- sim_trainer ----------------------------------------------------------------

SimTrainerParams SimTrainerParams::generate(Eigen::Index dim, std::uint64_t fixture_seed) {
  if (dim <= 0) throw ConfigError("sim_trainer needs a positive dimension");
  Rng rng(fixture_seed);
  SimTrainerParams p;
  p.centers.resize(dim);
  p.widths.resize(dim);
  p.weights.resize(dim);
  for (Eigen::Index k = 0; k < dim; ++k) p.centers[k] = rng.uniform(0.25, 0.75);
  for (Eigen::Index k = 0; k < dim; ++k) p.widths[k] = rng.uniform(0.18, 0.30);
  for (Eigen::Index k = 0; k < dim; ++k) p.weights[k] = rng.uniform(0.5, 1.5);
  p.weights /= p.weights.sum();
  p.couplings = Eigen::MatrixXd::Zero(dim, dim);
  for (Eigen::Index k = 0; k < dim; ++k)
    for (Eigen::Index l = k + 1; l < dim; ++l)
      p.couplings(k, l) = rng.uniform(-0.05, 0.05);
  return p;
}

SimTrainerSurface::SimTrainerSurface(Eigen::Index dim, double noise_stddev,
                                     std::uint64_t fixture_seed)
    : params_(SimTrainerParams::generate(dim, fixture_seed)),
      noise_stddev_(noise_stddev) {
  if (noise_stddev_ < 0.0) throw ConfigError("sim_trainer noise_stddev must be >= 0");
}

double SimTrainerSurface::score(const StrategyVector& x) const {
  const Eigen::Index d = params_.centers.size();
  if (x.size() != d) throw std::invalid_argument("sim_trainer: dimension mismatch");
  Eigen::VectorXd bumps(d);
  for (Eigen::Index k = 0; k < d; ++k) {
    const double z = (x[k] - params_.centers[k]) / params_.widths[k];
    bumps[k] = std::exp(-0.5 * z * z);
  }
  double value = 0.15 + 0.75 * params_.weights.dot(bumps);
  for (Eigen::Index k = 0; k < d; ++k)
    for (Eigen::Index l = k + 1; l < d; ++l)
      value += params_.couplings(k, l) * (bumps[k] - 0.5) * (bumps[l] - 0.5);
  return value;
}

EvaluationResult SimTrainerSurface::evaluate(const EvaluationRequest& request) const {
  double reward = score(request.strategy);
  if (noise_stddev_ > 0.0) {
    Rng rng(request.rng_seed);
    reward += noise_stddev_ * rng.normal();
  }
  EvaluationResult result;
  result.trial_id = request.trial_id;
  result.reward = std::clamp(reward, 0.0, 1.0);
  return result;
}

// --- toy segmentation --------------------------------------------------------

namespace {

constexpr int kToyVolumeSize = 14;
constexpr int kToyNumCases = 4;
constexpr float kToyForeground = 0.72f;
constexpr float kToyBackground = 0.28f;
constexpr float kToyNoiseStddev = 0.18f;
constexpr double kToyThreshold = 0.5;
constexpr double kToyBestLr = 0.45;       // normalized lr with perfect calibration
constexpr double kToyCalibration = 0.3;   // threshold penalty curvature

LabelVolume threshold_segment(const Volume3D& vol, double threshold) {
  LabelVolume out(vol.nx, vol.ny, vol.nz);
  for (std::int64_t i = 0; i < vol.size(); ++i)
    out.labels[static_cast<std::size_t>(i)] =
        vol.voxels[static_cast<Eigen::Index>(i)] > threshold ? 1 : 0;
  return out;
}

}  // namespace

std::vector<ToySegmentationCase> ToySegmentationEvaluator::make_fixture_cases(
    std::uint64_t fixture_seed) {
  std::vector<ToySegmentationCase> cases;
  Rng rng(fixture_seed);
  const int n = kToyVolumeSize;
  for (int c = 0; c < kToyNumCases; ++c) {
    ToySegmentationCase tc;
    tc.truth = LabelVolume(n, n, n);
    tc.image = Volume3D(n, n, n);

    // Ellipsoid of varying center and radii per case.
    const double cx = rng.uniform(0.35, 0.65) * n;
    const double cy = rng.uniform(0.35, 0.65) * n;
    const double cz = rng.uniform(0.35, 0.65) * n;
    const double rx = rng.uniform(0.18, 0.3) * n;
    const double ry = rng.uniform(0.18, 0.3) * n;
    const double rz = rng.uniform(0.18, 0.3) * n;
    for (int z = 0; z < n; ++z) {
      for (int y = 0; y < n; ++y) {
        for (int x = 0; x < n; ++x) {
          const double dx = (x - cx) / rx;
          const double dy = (y - cy) / ry;
          const double dz = (z - cz) / rz;
          const bool inside = dx * dx + dy * dy + dz * dz <= 1.0;
          tc.truth.at(x, y, z) = inside ? 1 : 0;
          const float clean = inside ? kToyForeground : kToyBackground;
          const float noisy =
              clean + kToyNoiseStddev * static_cast<float>(rng.normal());
          tc.image.at(x, y, z) = std::clamp(noisy, 0.0f, 1.0f);
        }
      }
    }
    cases.push_back(std::move(tc));
  }
  return cases;
}

ToySegmentationEvaluator::ToySegmentationEvaluator(SearchSpace space,
                                                   std::uint64_t fixture_seed)
    : space_(std::move(space)), cases_(make_fixture_cases(fixture_seed)) {
  space_.validate();
  prob_index_.assign(kNumTransforms, -1);
  for (int i = 0; i < kNumTransforms; ++i) {
    const std::string name = to_string(static_cast<Transform>(i));
    for (Eigen::Index k = 0; k < space_.dim(); ++k) {
      if (space_.params[static_cast<std::size_t>(k)].name == name)
        prob_index_[static_cast<std::size_t>(i)] = static_cast<int>(k);
    }
  }
  for (Eigen::Index k = 0; k < space_.dim(); ++k) {
    if (space_.params[static_cast<std::size_t>(k)].name == "learning_rate")
      lr_index_ = static_cast<int>(k);
  }
}

EvaluationResult ToySegmentationEvaluator::evaluate(const EvaluationRequest& request) const {
  require_valid_strategy(space_, request.strategy);

  AugmentationPolicy policy;
  for (int i = 0; i < kNumTransforms; ++i) {
    const int idx = prob_index_[static_cast<std::size_t>(i)];
    policy.probs[static_cast<std::size_t>(i)] = idx >= 0 ? request.strategy[idx] : 0.0;
  }
  // The learning-rate coordinate degrades threshold calibration
  // quadratically away from its sweet spot.
  double threshold = kToyThreshold;
  if (lr_index_ >= 0) {
    const double u = request.strategy[lr_index_];
    threshold += kToyCalibration * (u - kToyBestLr) * (u - kToyBestLr);
  }

  double dice_sum = 0.0;
  for (std::size_t c = 0; c < cases_.size(); ++c) {
    const std::uint64_t seed = derive_seed(request.rng_seed, 0x70795365ULL, c);
    auto [augmented, applied] = apply_policy(cases_[c].image, policy, seed);
    (void)applied;
    const LabelVolume pred = threshold_segment(augmented, threshold);
    dice_sum += dice_score(pred, cases_[c].truth, 2);
  }

  EvaluationResult result;
  result.trial_id = request.trial_id;
  result.reward = dice_sum / static_cast<double>(cases_.size());
  result.detail["threshold"] = threshold;
  return result;
}

}  // namespace stratsearch
