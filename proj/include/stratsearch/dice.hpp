// Copyright (c) 2026 stratsearch contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "stratsearch/volume.hpp"

namespace stratsearch {

/// Mean Dice overlap over foreground classes 1..num_classes-1:
/// 2|P_c ∩ T_c| / (|P_c| + |T_c|), with empty-vs-empty classes scoring 1.
/// Throws std::invalid_argument on shape mismatch or out-of-range labels.
double dice_score(const LabelVolume& pred, const LabelVolume& truth, int num_classes);

}  // namespace stratsearch
