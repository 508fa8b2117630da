// Copyright (c) 2026 stratsearch contributors
// SPDX-License-Identifier: Apache-2.0

#include "stratsearch/volume.hpp"

#include <cstring>
#include <fstream>

#include "stratsearch/errors.hpp"

namespace stratsearch {

namespace {

constexpr char kMagic[4] = {'S', 'S', 'V', '1'};
constexpr std::uint32_t kVersion = 1;

void put_u32(std::ofstream& out, std::uint32_t v) {
  char bytes[4];
  for (int i = 0; i < 4; ++i) bytes[i] = static_cast<char>(v >> (8 * i));
  out.write(bytes, 4);
}

std::uint32_t get_u32(std::ifstream& in, const std::filesystem::path& path) {
  unsigned char bytes[4];
  if (!in.read(reinterpret_cast<char*>(bytes), 4))
    throw DecodeError("volume file truncated: " + path.string());
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(bytes[i]) << (8 * i);
  return v;
}

}  // namespace

Volume3D::Volume3D(int nx_, int ny_, int nz_, float fill)
    : nx(nx_), ny(ny_), nz(nz_) {
  if (nx <= 0 || ny <= 0 || nz <= 0)
    throw std::invalid_argument("volume shape must be positive");
  voxels = Eigen::ArrayXf::Constant(size(), fill);
}

LabelVolume::LabelVolume(int nx_, int ny_, int nz_, std::int32_t fill)
    : nx(nx_), ny(ny_), nz(nz_) {
  if (nx <= 0 || ny <= 0 || nz <= 0)
    throw std::invalid_argument("volume shape must be positive");
  labels.assign(static_cast<std::size_t>(size()), fill);
}

void write_volume(const std::filesystem::path& path, const Volume3D& vol) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open volume file for writing: " + path.string());
  out.write(kMagic, 4);
  put_u32(out, kVersion);
  put_u32(out, static_cast<std::uint32_t>(vol.nx));
  put_u32(out, static_cast<std::uint32_t>(vol.ny));
  put_u32(out, static_cast<std::uint32_t>(vol.nz));
  for (Eigen::Index i = 0; i < vol.voxels.size(); ++i) {
    std::uint32_t bits;
    float f = vol.voxels[i];
    std::memcpy(&bits, &f, sizeof(bits));
    put_u32(out, bits);
  }
  if (!out) throw std::runtime_error("failed writing volume file: " + path.string());
}

Volume3D read_volume(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DecodeError("cannot open volume file: " + path.string());

  char magic[4];
  if (!in.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0)
    throw DecodeError("not a volume file (bad magic): " + path.string());
  const std::uint32_t version = get_u32(in, path);
  if (version != kVersion)
    throw DecodeError("unsupported volume file version: " + path.string());

  const std::uint32_t nx = get_u32(in, path);
  const std::uint32_t ny = get_u32(in, path);
  const std::uint32_t nz = get_u32(in, path);
  if (nx == 0 || ny == 0 || nz == 0 || nx > (1u << 20) || ny > (1u << 20) || nz > (1u << 20))
    throw DecodeError("volume file has implausible shape: " + path.string());

  Volume3D vol(static_cast<int>(nx), static_cast<int>(ny), static_cast<int>(nz));
  for (Eigen::Index i = 0; i < vol.voxels.size(); ++i) {
    const std::uint32_t bits = get_u32(in, path);
    float f;
    std::memcpy(&f, &bits, sizeof(f));
    if (!std::isfinite(f))
      throw DecodeError("volume file contains non-finite voxels: " + path.string());
    vol.voxels[i] = f;
  }
  in.peek();
  if (!in.eof()) throw DecodeError("volume file has trailing bytes: " + path.string());
  return vol;
}

}  // namespace stratsearch
