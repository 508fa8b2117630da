// Copyright (c) 2026 stratsearch contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Core>
#include <array>
#include <cstdint>
#include <filesystem>
#include <vector>

namespace stratsearch {

/// Dense 3D scalar volume of normalized intensities. Voxels are stored
/// x-fastest: index = x + nx * (y + ny * z).
struct Volume3D {
  int nx = 0, ny = 0, nz = 0;
  Eigen::ArrayXf voxels;

  Volume3D() = default;
  Volume3D(int nx_, int ny_, int nz_, float fill = 0.0f);

  std::int64_t size() const {
    return static_cast<std::int64_t>(nx) * ny * nz;
  }
  std::int64_t index(int x, int y, int z) const {
    return x + static_cast<std::int64_t>(nx) * (y + static_cast<std::int64_t>(ny) * z);
  }
  float& at(int x, int y, int z) { return voxels[index(x, y, z)]; }
  float at(int x, int y, int z) const { return voxels[index(x, y, z)]; }

  bool same_shape(const Volume3D& other) const {
    return nx == other.nx && ny == other.ny && nz == other.nz;
  }
};

/// Integer label volume for segmentation masks; same x-fastest layout.
struct LabelVolume {
  int nx = 0, ny = 0, nz = 0;
  std::vector<std::int32_t> labels;

  LabelVolume() = default;
  LabelVolume(int nx_, int ny_, int nz_, std::int32_t fill = 0);

  std::int64_t size() const {
    return static_cast<std::int64_t>(nx) * ny * nz;
  }
  std::int64_t index(int x, int y, int z) const {
    return x + static_cast<std::int64_t>(nx) * (y + static_cast<std::int64_t>(ny) * z);
  }
  std::int32_t& at(int x, int y, int z) { return labels[index(x, y, z)]; }
  std::int32_t at(int x, int y, int z) const { return labels[index(x, y, z)]; }

  bool same_shape(const LabelVolume& other) const {
    return nx == other.nx && ny == other.ny && nz == other.nz;
  }
};

// Minimal raw volume file: magic "SSV1", u32 version, u32 nx, ny, nz, then
// nx*ny*nz little-endian float32 voxels.
void write_volume(const std::filesystem::path& path, const Volume3D& vol);

/// Throws DecodeError on bad magic, truncation, trailing bytes, or
/// non-finite voxels.
Volume3D read_volume(const std::filesystem::path& path);

}  // namespace stratsearch
