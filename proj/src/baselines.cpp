// Copyright (c) 2026 stratsearch contributors
// SPDX-License-Identifier: Apache-2.0

#include "stratsearch/baselines.hpp"

#include <cmath>
#include <cstring>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "stratsearch/errors.hpp"

namespace stratsearch {

void HillClimbConfig::validate() const {
  if (max_evals <= 0) throw ConfigError("hill climb max_evals must be positive");
  if (mode == HillClimbMode::Discrete) {
    if (grid_dim <= 0) throw ConfigError("hill climb grid_dim must be positive");
    if (std::abs(step * grid_dim - 1.0) > 1e-9)
      throw ConfigError("discrete hill climb requires step == 1/grid_dim");
  } else {
    if (!(step > 0.0)) throw ConfigError("hill climb step must be positive");
    if (!(growth > 1.0)) throw ConfigError("hill climb growth must exceed 1");
    if (!(min_step > 0.0 && min_step <= step))
      throw ConfigError("hill climb min_step must lie in (0, step]");
  }
}

namespace {

std::string describe_point(const StrategyVector& x) {
  std::ostringstream ss;
  ss << "[";
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    if (k) ss << ", ";
    ss << x[k];
  }
  ss << "]";
  return ss.str();
}

// Memoizing wrapper around the objective. Keys on the exact bit pattern of
// the point so repeated visits reuse the first sample.
class CachedObjective {
 public:
  CachedObjective(const ObjectiveFn& fn, const TraceSink& trace, long max_evals)
      : fn_(fn), trace_(trace), max_evals_(max_evals) {}

  bool budget_left() const { return evals_ < max_evals_; }
  long evals() const { return evals_; }

  double operator()(const StrategyVector& x) {
    std::string key(reinterpret_cast<const char*>(x.data()),
                    sizeof(double) * static_cast<std::size_t>(x.size()));
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;

    double value;
    try {
      value = fn_(x);
    } catch (const EvalError&) {
      throw;
    } catch (const std::exception& e) {
      throw EvalError(EvalFailureKind::Other,
                      std::string("objective failed at ") + describe_point(x) +
                          ": " + e.what());
    }
    if (!std::isfinite(value))
      throw EvalError(EvalFailureKind::BadValue,
                      "objective returned non-finite value at " + describe_point(x));
    ++evals_;
    cache_.emplace(std::move(key), value);
    if (trace_) trace_(x, value);
    return value;
  }

 private:
  const ObjectiveFn& fn_;
  const TraceSink& trace_;
  long max_evals_;
  long evals_ = 0;
  std::unordered_map<std::string, double> cache_;
};

StrategyVector grid_to_real(const std::vector<int>& idx, int grid_dim) {
  StrategyVector x(static_cast<Eigen::Index>(idx.size()));
  for (std::size_t k = 0; k < idx.size(); ++k)
    x[static_cast<Eigen::Index>(k)] = static_cast<double>(idx[k]) / grid_dim;
  return x;
}

HillClimbResult climb_discrete(CachedObjective& objective, const StrategyVector& start,
                               const HillClimbConfig& config) {
  const int n = config.grid_dim;
  const Eigen::Index d = start.size();

  // Iterates live on integer indices; reals are derived only for evaluation,
  // so grid points never drift.
  std::vector<int> current(static_cast<std::size_t>(d));
  for (Eigen::Index k = 0; k < d; ++k) {
    const double scaled = start[k] * n;
    const int idx = static_cast<int>(std::lround(scaled));
    if (std::abs(scaled - idx) > 1e-9 || idx < 0 || idx > n) {
      std::ostringstream msg;
      msg << "discrete hill climb start coordinate " << k << " = " << start[k]
          << " is not on the 1/" << n << " grid";
      throw std::invalid_argument(msg.str());
    }
    current[static_cast<std::size_t>(k)] = idx;
  }

  double current_value = objective(grid_to_real(current, n));

  while (objective.budget_left()) {
    // Best-improvement sweep over all 2d neighbors; ties resolve to the
    // lowest coordinate index, minus direction first.
    bool moved = false;
    std::vector<int> best_neighbor;
    double best_value = current_value;
    for (std::size_t k = 0; k < current.size() && objective.budget_left(); ++k) {
      for (int delta : {-1, +1}) {
        const int moved_idx = current[k] + delta;
        if (moved_idx < 0 || moved_idx > n) continue;  // stay within [0, 1]
        std::vector<int> neighbor = current;
        neighbor[k] = moved_idx;
        const double value = objective(grid_to_real(neighbor, n));
        if (value > best_value) {
          best_value = value;
          best_neighbor = std::move(neighbor);
          moved = true;
        }
        if (!objective.budget_left()) break;
      }
    }
    if (!moved) break;
    current = best_neighbor;
    current_value = best_value;
  }

  HillClimbResult result;
  result.best = grid_to_real(current, n);
  result.best_value = current_value;
  result.evals = objective.evals();
  return result;
}

HillClimbResult climb_continuous(CachedObjective& objective, const StrategyVector& start,
                                 const HillClimbConfig& config) {
  const Eigen::Index d = start.size();

  StrategyVector current = start;
  double current_value = objective(current);

  Eigen::VectorXd magnitude = Eigen::VectorXd::Constant(d, config.step);
  std::vector<int> direction(static_cast<std::size_t>(d), +1);
  std::vector<long> fails(static_cast<std::size_t>(d), 0);

  while (objective.budget_left()) {
    if ((magnitude.array() < config.min_step).all()) break;

    for (Eigen::Index k = 0; k < d && objective.budget_left(); ++k) {
      if (magnitude[k] < config.min_step) continue;
      const std::size_t ks = static_cast<std::size_t>(k);

      StrategyVector candidate = current;
      candidate[k] = std::clamp(current[k] + direction[ks] * magnitude[k], 0.0, 1.0);

      // A move clamped back onto the current point cannot improve.
      bool improved = false;
      double value = current_value;
      if (candidate[k] != current[k]) {
        value = objective(candidate);
        improved = value > current_value;
      }

      if (improved) {
        current = candidate;
        current_value = value;
        magnitude[k] *= config.growth;
        fails[ks] = 0;
      } else {
        ++fails[ks];
        magnitude[k] /= config.growth;
        if (fails[ks] % 2 == 1) direction[ks] = -direction[ks];
      }
    }
  }

  HillClimbResult result;
  result.best = current;
  result.best_value = current_value;
  result.evals = objective.evals();
  return result;
}

}  // namespace

HillClimbResult hill_climb(const ObjectiveFn& objective, const StrategyVector& start,
                           const HillClimbConfig& config, const TraceSink& trace) {
  config.validate();
  for (Eigen::Index k = 0; k < start.size(); ++k) {
    if (!std::isfinite(start[k]) || start[k] < 0.0 || start[k] > 1.0)
      throw std::invalid_argument("hill climb start must lie in [0,1]^d");
  }
  if (start.size() == 0) throw std::invalid_argument("hill climb start is empty");

  CachedObjective cached(objective, trace, config.max_evals);
  return config.mode == HillClimbMode::Discrete
             ? climb_discrete(cached, start, config)
             : climb_continuous(cached, start, config);
}

}  // namespace stratsearch
