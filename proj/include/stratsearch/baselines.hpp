// Copyright (c) 2026 stratsearch contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Core>
#include <functional>

#include "stratsearch/search_space.hpp"

namespace stratsearch {

enum class HillClimbMode {
  Discrete,    // fixed-step moves on a grid of grid_dim intervals per axis
  Continuous,  // per-coordinate adaptive step, x1.1 on success, /1.1 on failure
};

struct HillClimbConfig {
  HillClimbMode mode = HillClimbMode::Discrete;
  int grid_dim = 100;       // discrete: number of intervals, grid points = grid_dim + 1
  double step = 0.01;       // discrete: fixed step (must equal 1/grid_dim);
                            // continuous: initial step magnitude
  double growth = 1.1;      // continuous: step multiplier on success
  double min_step = 1e-4;   // continuous: stop once every magnitude is below this
  long max_evals = 100000;  // hard budget on objective evaluations

  void validate() const;
};

/// Objective to MAXIMIZE. Must return a finite value or throw.
using ObjectiveFn = std::function<double(const StrategyVector&)>;

/// Called once per actual objective evaluation (cache misses only).
using TraceSink = std::function<void(const StrategyVector&, double)>;

struct HillClimbResult {
  StrategyVector best;
  double best_value = 0.0;
  long evals = 0;  // objective evaluations performed
};

/// Greedy local search from `start` (which must be on the grid in discrete
/// mode). Distinct points are evaluated once and cached; accepted iterate
/// values strictly increase. Throws EvalError with the offending strategy in
/// the message when the objective fails or returns a non-finite value.
HillClimbResult hill_climb(const ObjectiveFn& objective, const StrategyVector& start,
                           const HillClimbConfig& config,
                           const TraceSink& trace = nullptr);

}  // namespace stratsearch
