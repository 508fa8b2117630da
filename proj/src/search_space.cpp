// Copyright (c) 2026 stratsearch contributors
// SPDX-License-Identifier: Apache-2.0

#include "stratsearch/search_space.hpp"

#include <cmath>
#include <set>
#include <sstream>

#include "stratsearch/errors.hpp"
#include "stratsearch/rng.hpp"

namespace stratsearch {

const char* to_string(ParamKind kind) {
  switch (kind) {
    case ParamKind::Hyperparameter:
      return "hyperparameter";
    case ParamKind::AugmentationProbability:
      return "augmentation_probability";
  }
  return "unknown";
}

ParamKind param_kind_from_string(const std::string& s) {
  if (s == "hyperparameter") return ParamKind::Hyperparameter;
  if (s == "augmentation_probability") return ParamKind::AugmentationProbability;
  throw ConfigError("unknown param kind '" + s +
                    "' (expected 'hyperparameter' or 'augmentation_probability')");
}

void SearchSpace::validate() const {
  if (params.empty()) throw ConfigError("search space must not be empty");
  std::set<std::string> names;
  for (const ParamSpec& p : params) {
    if (p.name.empty()) throw ConfigError("search-space parameter with empty name");
    if (!names.insert(p.name).second)
      throw ConfigError("duplicate search-space parameter name '" + p.name + "'");
    if (!std::isfinite(p.min) || !std::isfinite(p.max))
      throw ConfigError("parameter '" + p.name + "' has non-finite bounds");
    if (!(p.min < p.max))
      throw ConfigError("parameter '" + p.name + "' requires min < max");
    if (p.kind == ParamKind::AugmentationProbability &&
        (p.min != 0.0 || p.max != 1.0))
      throw ConfigError("probability parameter '" + p.name +
                        "' must have bounds [0, 1]");
  }
}

namespace {

void check_dim(const SearchSpace& space, Eigen::Index got, const char* what) {
  if (got != space.dim()) {
    std::ostringstream msg;
    msg << what << ": expected dimension " << space.dim() << ", got " << got;
    throw std::invalid_argument(msg.str());
  }
}

}  // namespace

StrategyVector normalize(const SearchSpace& space, const Eigen::VectorXd& native) {
  check_dim(space, native.size(), "normalize");
  StrategyVector out(space.dim());
  for (Eigen::Index k = 0; k < space.dim(); ++k) {
    const ParamSpec& p = space.params[static_cast<std::size_t>(k)];
    const double x = native[k];
    if (!std::isfinite(x) || x < p.min || x > p.max) {
      std::ostringstream msg;
      msg << "normalize: value " << x << " for '" << p.name
          << "' outside [" << p.min << ", " << p.max << "]";
      throw std::invalid_argument(msg.str());
    }
    out[k] = (x - p.min) / (p.max - p.min);
  }
  return out;
}

Eigen::VectorXd denormalize(const SearchSpace& space, const StrategyVector& strategy) {
  require_valid_strategy(space, strategy);
  Eigen::VectorXd out(space.dim());
  for (Eigen::Index k = 0; k < space.dim(); ++k) {
    const ParamSpec& p = space.params[static_cast<std::size_t>(k)];
    out[k] = p.min + strategy[k] * (p.max - p.min);
  }
  return out;
}

StrategyVector random_strategy(const SearchSpace& space, std::uint64_t rng_seed) {
  Rng rng(rng_seed);
  StrategyVector out(space.dim());
  for (Eigen::Index k = 0; k < space.dim(); ++k) out[k] = rng.uniform();
  return out;
}

bool is_valid_strategy(const SearchSpace& space, const StrategyVector& strategy) {
  if (strategy.size() != space.dim()) return false;
  for (Eigen::Index k = 0; k < strategy.size(); ++k) {
    const double v = strategy[k];
    if (!std::isfinite(v) || v < 0.0 || v > 1.0) return false;
  }
  return true;
}

void require_valid_strategy(const SearchSpace& space, const StrategyVector& strategy) {
  check_dim(space, strategy.size(), "strategy");
  for (Eigen::Index k = 0; k < strategy.size(); ++k) {
    const double v = strategy[k];
    if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
      std::ostringstream msg;
      msg << "strategy component " << k << " = " << v << " outside [0, 1]";
      throw std::invalid_argument(msg.str());
    }
  }
}

}  // namespace stratsearch
