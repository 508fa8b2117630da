// Copyright (c) 2026 stratsearch contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace stratsearch {

/// splitmix64 step; used to derive independent seed streams from one master
/// seed so that every trial/proposal gets its own reproducible seed.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream,
                                 std::uint64_t index) {
  return splitmix64(splitmix64(master ^ splitmix64(stream)) ^ index);
}

// Seed stream tags. Arbitrary fixed constants; changing any of them changes
// every derived random sequence.
namespace seed_stream {
inline constexpr std::uint64_t kControllerInit = 0x01;
inline constexpr std::uint64_t kInitStrategy = 0x02;
inline constexpr std::uint64_t kProposal = 0x03;
inline constexpr std::uint64_t kEvaluation = 0x04;
inline constexpr std::uint64_t kBaselineEval = 0x05;
}  // namespace seed_stream

/// Deterministic random source. mt19937_64 is fully specified by the
/// standard and the mapping to doubles below is explicit, so sequences are
/// reproducible across platforms and standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  /// Uniform on [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard normal via Box-Muller; caches the second deviate.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    double u2 = uniform();
    while (u1 <= 0.0) u1 = uniform();  // guard log(0)
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * M_PI * u2;
    spare_ = radius * std::sin(angle);
    have_spare_ = true;
    return radius * std::cos(angle);
  }

  std::uint64_t next_u64() { return engine_(); }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace stratsearch
