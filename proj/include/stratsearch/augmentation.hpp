// Copyright (c) 2026 stratsearch contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <utility>

#include "stratsearch/rng.hpp"
#include "stratsearch/volume.hpp"

namespace stratsearch {

/// The five transforms, in the fixed order the pipeline composes them.
enum class Transform : int {
  Sharpen = 0,
  Smooth = 1,
  GaussianNoise = 2,
  Contrast = 3,
  IntensityShift = 4,
};

inline constexpr int kNumTransforms = 5;

const char* to_string(Transform t);

// Fixed per-transform magnitudes; only the probabilities are searched.
inline constexpr float kSharpenAmount = 1.0f;       // unsharp-mask strength
inline constexpr float kNoiseStddev = 0.05f;        // additive Gaussian sigma
inline constexpr float kContrastLow = 0.7f;         // contrast factor range
inline constexpr float kContrastHigh = 1.3f;
inline constexpr float kShiftLow = -0.1f;           // intensity shift range
inline constexpr float kShiftHigh = 0.1f;

/// Per-transform application probabilities, indexed by Transform order.
struct AugmentationPolicy {
  std::array<double, kNumTransforms> probs{};

  void validate() const;  // throws std::invalid_argument outside [0,1]
};

// Individual transforms. Outputs are clamped to [0,1]; stochastic ones are
// deterministic per seed.
Volume3D smooth(const Volume3D& vol);
Volume3D sharpen(const Volume3D& vol);
Volume3D gaussian_noise(const Volume3D& vol, std::uint64_t rng_seed);
Volume3D contrast(const Volume3D& vol, std::uint64_t rng_seed);
Volume3D intensity_shift(const Volume3D& vol, std::uint64_t rng_seed);

/// Bernoulli-gated pipeline: for each transform i in order, a uniform draw
/// r_i applies the transform iff r_i < probs[i]. Returns the transformed
/// volume and the gate outcomes. Deterministic per (vol, policy, seed).
std::pair<Volume3D, std::array<bool, kNumTransforms>> apply_policy(
    const Volume3D& vol, const AugmentationPolicy& policy, std::uint64_t rng_seed);

namespace detail {

// Unclamped kernels, exposed for linearity/property tests and reused by the
// public clamped wrappers.
Volume3D smooth_unclamped(const Volume3D& vol);
Volume3D sharpen_unclamped(const Volume3D& vol);
Volume3D gaussian_noise_unclamped(const Volume3D& vol, Rng& rng);
Volume3D contrast_unclamped(const Volume3D& vol, Rng& rng);
Volume3D intensity_shift_unclamped(const Volume3D& vol, Rng& rng);

void clamp_unit(Volume3D& vol);

}  // namespace detail

}  // namespace stratsearch
