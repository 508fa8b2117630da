// Copyright (c) 2026 stratsearch contributors
// SPDX-License-Identifier: Apache-2.0

#include "stratsearch/augmentation.hpp"

#include <algorithm>
#include <stdexcept>

namespace stratsearch {

const char* to_string(Transform t) {
  switch (t) {
    case Transform::Sharpen:
      return "sharpen";
    case Transform::Smooth:
      return "smooth";
    case Transform::GaussianNoise:
      return "gaussian_noise";
    case Transform::Contrast:
      return "contrast";
    case Transform::IntensityShift:
      return "intensity_shift";
  }
  return "unknown";
}

void AugmentationPolicy::validate() const {
  for (double p : probs) {
    if (!(p >= 0.0 && p <= 1.0))
      throw std::invalid_argument("augmentation probability outside [0, 1]");
  }
}

namespace detail {

void clamp_unit(Volume3D& vol) { vol.voxels = vol.voxels.min(1.0f).max(0.0f); }

namespace {

// One pass of the separable 3-tap kernel [0.25, 0.5, 0.25] along `axis`
// (0 = x, 1 = y, 2 = z), with edge-replicate padding.
Volume3D blur_axis(const Volume3D& vol, int axis) {
  Volume3D out(vol.nx, vol.ny, vol.nz);
  const int extent[3] = {vol.nx, vol.ny, vol.nz};
  for (int z = 0; z < vol.nz; ++z) {
    for (int y = 0; y < vol.ny; ++y) {
      for (int x = 0; x < vol.nx; ++x) {
        int c[3] = {x, y, z};
        int lo[3] = {x, y, z};
        int hi[3] = {x, y, z};
        lo[axis] = std::max(c[axis] - 1, 0);
        hi[axis] = std::min(c[axis] + 1, extent[axis] - 1);
        out.at(x, y, z) = 0.25f * vol.at(lo[0], lo[1], lo[2]) +
                          0.5f * vol.at(x, y, z) +
                          0.25f * vol.at(hi[0], hi[1], hi[2]);
      }
    }
  }
  return out;
}

}  // namespace

Volume3D smooth_unclamped(const Volume3D& vol) {
  return blur_axis(blur_axis(blur_axis(vol, 0), 1), 2);
}

Volume3D sharpen_unclamped(const Volume3D& vol) {
  Volume3D blurred = smooth_unclamped(vol);
  Volume3D out = vol;
  out.voxels = vol.voxels + kSharpenAmount * (vol.voxels - blurred.voxels);
  return out;
}

Volume3D gaussian_noise_unclamped(const Volume3D& vol, Rng& rng) {
  Volume3D out = vol;
  for (Eigen::Index i = 0; i < out.voxels.size(); ++i)
    out.voxels[i] += kNoiseStddev * static_cast<float>(rng.normal());
  return out;
}

Volume3D contrast_unclamped(const Volume3D& vol, Rng& rng) {
  const float factor = static_cast<float>(rng.uniform(kContrastLow, kContrastHigh));
  Volume3D out = vol;
  out.voxels = (vol.voxels - 0.5f) * factor + 0.5f;
  return out;
}

Volume3D intensity_shift_unclamped(const Volume3D& vol, Rng& rng) {
  const float shift = static_cast<float>(rng.uniform(kShiftLow, kShiftHigh));
  Volume3D out = vol;
  out.voxels = vol.voxels + shift;
  return out;
}

}  // namespace detail

Volume3D smooth(const Volume3D& vol) {
  Volume3D out = detail::smooth_unclamped(vol);
  detail::clamp_unit(out);
  return out;
}

Volume3D sharpen(const Volume3D& vol) {
  Volume3D out = detail::sharpen_unclamped(vol);
  detail::clamp_unit(out);
  return out;
}

Volume3D gaussian_noise(const Volume3D& vol, std::uint64_t rng_seed) {
  Rng rng(rng_seed);
  Volume3D out = detail::gaussian_noise_unclamped(vol, rng);
  detail::clamp_unit(out);
  return out;
}

Volume3D contrast(const Volume3D& vol, std::uint64_t rng_seed) {
  Rng rng(rng_seed);
  Volume3D out = detail::contrast_unclamped(vol, rng);
  detail::clamp_unit(out);
  return out;
}

Volume3D intensity_shift(const Volume3D& vol, std::uint64_t rng_seed) {
  Rng rng(rng_seed);
  Volume3D out = detail::intensity_shift_unclamped(vol, rng);
  detail::clamp_unit(out);
  return out;
}

std::pair<Volume3D, std::array<bool, kNumTransforms>> apply_policy(
    const Volume3D& vol, const AugmentationPolicy& policy, std::uint64_t rng_seed) {
  policy.validate();
  Rng rng(rng_seed);
  Volume3D out = vol;
  std::array<bool, kNumTransforms> applied{};
  for (int i = 0; i < kNumTransforms; ++i) {
    const double gate = rng.uniform();
    applied[static_cast<std::size_t>(i)] = gate < policy.probs[static_cast<std::size_t>(i)];
    if (!applied[static_cast<std::size_t>(i)]) continue;
    switch (static_cast<Transform>(i)) {
      case Transform::Sharpen:
        out = detail::sharpen_unclamped(out);
        break;
      case Transform::Smooth:
        out = detail::smooth_unclamped(out);
        break;
      case Transform::GaussianNoise:
        out = detail::gaussian_noise_unclamped(out, rng);
        break;
      case Transform::Contrast:
        out = detail::contrast_unclamped(out, rng);
        break;
      case Transform::IntensityShift:
        out = detail::intensity_shift_unclamped(out, rng);
        break;
    }
    detail::clamp_unit(out);
  }
  return {std::move(out), applied};
}

}  // namespace stratsearch
