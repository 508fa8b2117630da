// Copyright (c) 2026 stratsearch contributors
// SPDX-License-Identifier: Apache-2.0

#include "stratsearch/dice.hpp"

#include <sstream>
#include <stdexcept>
#include <vector>

namespace stratsearch {

double dice_score(const LabelVolume& pred, const LabelVolume& truth, int num_classes) {
  if (!pred.same_shape(truth))
    throw std::invalid_argument("dice_score: prediction/truth shape mismatch");
  if (num_classes < 2)
    throw std::invalid_argument("dice_score: need at least one foreground class");

  std::vector<std::int64_t> pred_count(static_cast<std::size_t>(num_classes), 0);
  std::vector<std::int64_t> truth_count(static_cast<std::size_t>(num_classes), 0);
  std::vector<std::int64_t> inter_count(static_cast<std::size_t>(num_classes), 0);

  for (std::size_t i = 0; i < pred.labels.size(); ++i) {
    const std::int32_t p = pred.labels[i];
    const std::int32_t t = truth.labels[i];
    if (p < 0 || p >= num_classes || t < 0 || t >= num_classes) {
      std::ostringstream msg;
      msg << "dice_score: label out of range [0, " << num_classes << ") at voxel " << i;
      throw std::invalid_argument(msg.str());
    }
    ++pred_count[static_cast<std::size_t>(p)];
    ++truth_count[static_cast<std::size_t>(t)];
    if (p == t) ++inter_count[static_cast<std::size_t>(p)];
  }

  double sum = 0.0;
  for (int c = 1; c < num_classes; ++c) {
    const std::int64_t denom = pred_count[static_cast<std::size_t>(c)] +
                               truth_count[static_cast<std::size_t>(c)];
    sum += denom == 0
               ? 1.0
               : 2.0 * static_cast<double>(inter_count[static_cast<std::size_t>(c)]) /
                     static_cast<double>(denom);
  }
  return sum / (num_classes - 1);
}

}  // namespace stratsearch
