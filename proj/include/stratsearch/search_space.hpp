// Copyright (c) 2026 stratsearch contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <vector>

namespace stratsearch {

/// A candidate configuration in normalized coordinates. Every component is
/// finite and within [0, 1]; the length equals the search-space dimension.
using StrategyVector = Eigen::VectorXd;

enum class ParamKind {
  Hyperparameter,
  AugmentationProbability,
};

const char* to_string(ParamKind kind);
ParamKind param_kind_from_string(const std::string& s);

/// One search dimension in native units.
struct ParamSpec {
  std::string name;
  double min = 0.0;
  double max = 1.0;
  ParamKind kind = ParamKind::Hyperparameter;
};

/// Ordered, fixed-dimension set of search dimensions. Names are unique,
/// min < max, and probability dimensions span exactly [0, 1].
struct SearchSpace {
  std::vector<ParamSpec> params;

  Eigen::Index dim() const { return static_cast<Eigen::Index>(params.size()); }

  /// Throws ConfigError if any invariant is violated.
  void validate() const;
};

/// Maps native coordinates onto [0,1]^d with the linear map
/// (x - min) / (max - min). Native values must lie within their bounds.
StrategyVector normalize(const SearchSpace& space, const Eigen::VectorXd& native);

/// Inverse of normalize: min + v * (max - min).
Eigen::VectorXd denormalize(const SearchSpace& space, const StrategyVector& strategy);

/// Each component independently uniform on [0,1]; deterministic per seed.
StrategyVector random_strategy(const SearchSpace& space, std::uint64_t rng_seed);

bool is_valid_strategy(const SearchSpace& space, const StrategyVector& strategy);

/// Throws std::invalid_argument when the vector is not a valid strategy.
void require_valid_strategy(const SearchSpace& space, const StrategyVector& strategy);

}  // namespace stratsearch
